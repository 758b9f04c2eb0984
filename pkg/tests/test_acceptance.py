"""Acceptance criteria 1-10, one test each.

Each test records a PASS/FAIL line that the terminal summary prints in a
block at the end of the run.  Suites run once per session at seed 1; the
determinism check reruns all five and compares JSON bytes.
"""

import json
import math

import pytest
from click.testing import CliRunner

from gausslucas.cli import dumps, main
from gausslucas.extremal import ratio
from gausslucas.poly import from_roots
from gausslucas.suites import run_suite

from conftest import record_criterion

SEED = 1
SUITE_NAMES = ("gauss-lucas", "roundtrip", "claim", "dnk-dichotomy", "adversarial")
_cache: dict[str, dict] = {}


def suite(name: str) -> dict:
    if name not in _cache:
        _cache[name] = run_suite(name, seed=SEED)
    return _cache[name]


def check(doc: dict, name: str) -> dict:
    return next(c for c in doc["checks"] if c["name"] == name)


def verdict(number, title, ok, detail=""):
    record_criterion(number, title, ok, detail)
    assert ok, f"criterion {number} failed: {detail}"


def test_c01_d31_reproduction():
    res = CliRunner().invoke(main, ["dnk", "--n", "3", "--k", "1", "--starts", "200"])
    doc = json.loads(res.stdout)
    best = doc["best_ratio"]
    witness = [complex(re, im) for re, im in doc["witness_roots"]]
    reeval = ratio(from_roots(witness), 1)
    ok = res.exit_code == 0 and 2 / 3 - 1e-4 <= best <= 2 / 3 + 1e-3 and abs(reeval - best) <= 1e-8
    verdict(1, "d(3,1) reproduction", ok, f"best_ratio={best!r} reevaluated={reeval!r}")


def test_c02_saturating_side():
    stats = check(suite("dnk-dichotomy"), "saturating_side")
    vals = {key: stats[f"d({key[0]},{key[1]})"] for key in ((4, 1), (5, 1), (6, 1), (6, 2))}
    ok = all(v >= 0.999 for v in vals.values())
    verdict(2, "dichotomy, saturating side (500 starts)", ok,
            " ".join(f"d{n}{k}={v:.6f}" for (n, k), v in vals.items()))


def test_c03_strict_side():
    stats = check(suite("dnk-dichotomy"), "strict_side")
    m31, m42 = stats["max_ratio(3,1)"], stats["max_ratio(4,2)"]
    ok = m31 <= 2 / 3 + 1e-3 and m42 <= 1 - 1e-3 and stats["ok"]
    verdict(3, "dichotomy, strict side (1e4 evals + 500 starts)", ok, f"max(3,1)={m31:.8f} max(4,2)={m42:.8f}")


def test_c04_gauss_lucas_suite():
    doc = suite("gauss-lucas")
    hull, diam = check(doc, "hull_containment"), check(doc, "derivative_diameter")
    ok = hull["total"] == hull["passed"] == 10_000 and diam["total"] == diam["passed"] == 10_000
    verdict(4, "Gauss-Lucas suite", ok,
            f"hull {hull['passed']}/{hull['total']} diam {diam['passed']}/{diam['total']} "
            f"worst_margin={hull['worst_margin']:.2e}")


def test_c05_adversarial_pm():
    pm = check(suite("adversarial"), "P_M_diameter")
    ok = pm["total"] == pm["passed"] == 9
    verdict(5, "P_M diameters equal 2 sqrt|M|", ok, f"{pm['passed']}/{pm['total']} within 1e-6 relative")


def test_c06_roundtrip():
    doc = suite("roundtrip")
    parts = [check(doc, f"Form{i}_roundtrip") for i in (1, 2, 3)]
    ok = all(c["total"] == c["passed"] == 1000 and c["worst_param_error"] <= 1e-6 for c in parts)
    verdict(6, "classification round trip", ok,
            " ".join(f"{c['name'].split('_')[0]} {c['passed']}/{c['total']} err={c['worst_param_error']:.1e}"
                     for c in parts))


def test_c07_refutation():
    ref = check(suite("adversarial"), "refutation")
    ok = ref["total"] == ref["passed"] == 3
    verdict(7, "refutation of P(z/2), none for P(2z) and P'", ok, f"{ref['passed']}/{ref['total']}")


def test_c08_claim():
    doc = suite("claim")
    sols, rej = check(doc, "claim_two_solutions"), check(doc, "claim_rejects_l2")
    ok = sols["total"] == sols["passed"] == 80 and rej["passed"] == rej["total"] == 1
    verdict(8, "claim solver", ok, f"{sols['passed']}/{sols['total']} cells, l=2 rejected={rej['ok']}")


def test_c09_shifted_power_basis():
    basis = check(suite("claim"), "shifted_power_basis")
    ok = basis["total"] == basis["passed"] == 120
    verdict(9, "shifted-power basis nonsingularity", ok, f"{basis['passed']}/{basis['total']}")


def test_c10_determinism():
    mismatched = [name for name in SUITE_NAMES if dumps(suite(name)) != dumps(run_suite(name, seed=SEED))]
    verdict(10, "determinism (byte-identical reruns)", not mismatched,
            "all five suites identical" if not mismatched else f"differ: {mismatched}")
