"""Seeded property suites.

Each suite returns a JSON-ready summary.  Every failure record carries the
single-case CLI command that replays it.  No wall-clock data enters the
output, so equal seeds give byte-identical JSON.
"""

from __future__ import annotations

import json
import math
from typing import Callable

import numpy as np

from .extremal import estimate_dnk, from_roots, ratio
from .geometry import diameter, gauss_lucas_check
from .operators import (
    AffineMap,
    LinearFunctional,
    PreconditionViolated,
    classify,
    claim_residual,
    claim_solutions,
    derivative_operator,
    make_form1,
    make_form2,
    make_form3,
    pm_polynomial,
    sample_polynomial,
    shifted_power_basis_matrix,
    substitution_operator,
    test_nonexpansive,
)
from .roots import RootError, find_roots

SUITES: dict[str, Callable] = {}
PROG = "gausslucas"


def _suite(name):
    def deco(fn):
        SUITES[name] = fn
        return fn

    return deco


def _inline(obj) -> str:
    return "'" + json.dumps(obj, separators=(",", ":")) + "'"


def _annulus(rng: np.random.Generator, size=None, lo: float = 0.5, hi: float = 2.0):
    r = rng.uniform(lo, hi, size)
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


class _Check:
    def __init__(self, name: str):
        self.name = name
        self.total = 0
        self.passed = 0
        self.failures: list[dict] = []
        self.stats: dict = {}

    def record(self, ok: bool, detail: dict | None = None, repro: str | None = None):
        self.total += 1
        if ok:
            self.passed += 1
        else:
            rec = dict(detail or {})
            if repro:
                rec["repro"] = repro
            self.failures.append(rec)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "total": self.total, "ok": self.passed == self.total}
        out.update(self.stats)
        # cap the listing; counts stay exact
        out["failures"] = self.failures[:20]
        return out


def _summary(name: str, seed: int, checks: list[_Check]) -> dict:
    return {
        "suite": name,
        "seed": seed,
        "pass": all(c.passed == c.total for c in checks),
        "checks": [c.to_json() for c in checks],
    }


@_suite("gauss-lucas")
def gauss_lucas_suite(seed: int = 1, trials: int = 10_000, tol: float = 1e-7) -> dict:
    """Z(P') in hull Z(P) and diam Z(P') <= diam Z(P), degrees 2..10."""
    hull_chk = _Check("hull_containment")
    diam_chk = _Check("derivative_diameter")
    worst = math.inf
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        p = sample_polynomial(rng, 10, min_degree=2)
        repro = f"{PROG} gauss-lucas --poly {_inline(p.to_json())} --tol {tol!r}"
        try:
            rep = gauss_lucas_check(p, tol)
        except RootError as e:
            hull_chk.record(False, {"trial": t, "error": str(e)}, repro)
            diam_chk.record(False, {"trial": t, "error": str(e)}, repro)
            continue
        if rep.margins:
            worst = min(worst, min(rep.margins))
        hull_chk.record(rep.passed, {"trial": t, "min_margin": min(rep.margins)}, repro)
        dp, dq = diameter(rep.roots), diameter(rep.critical_points)
        diam_chk.record(dq <= dp + tol, {"trial": t, "diam_p": dp, "diam_dp": dq}, repro)
    hull_chk.stats["worst_margin"] = worst
    return _summary("gauss-lucas", seed, [hull_chk, diam_chk])


def _random_form(rng: np.random.Generator, form: str):
    if form == "Form1":
        n = int(rng.integers(1, 9))
        l1, l2 = LinearFunctional(_annulus(rng, n + 1)), LinearFunctional(_annulus(rng, n + 1))
        return make_form1(l1, l2, n), {"l1": l1, "l2": l2}
    if form == "Form2":
        n = int(rng.integers(1, 9))
        c, m = complex(_annulus(rng)), int(rng.integers(2, 9))
        l3 = LinearFunctional(_annulus(rng, n + 1))
        return make_form2(c, m, l3, n), {"c": c, "m": m, "l3": l3}
    n = int(rng.integers(2, 9))
    k = int(rng.integers(0, n - 1))
    c, a, b = (complex(v) for v in _annulus(rng, 3))
    return make_form3(c, k, AffineMap(a, b), n), {"c": c, "k": k, "a": a, "b": b}


def _params_agree(form: str, match, want: dict, tol: float) -> tuple[bool, float]:
    if form == "Form1":
        err = max(
            np.max(np.abs(np.subtract(match.l1.weights, want["l1"].weights))),
            np.max(np.abs(np.subtract(match.l2.weights, want["l2"].weights))),
        )
        return err <= tol, float(err)
    if form == "Form2":
        got, ref = np.array(match.l3.weights), np.array(want["l3"].weights)
        lam = np.vdot(got, ref) / np.vdot(got, got)
        err = max(abs(match.c - want["c"]), float(np.max(np.abs(lam * got - ref))))
        return err <= tol and match.m == want["m"], float(err)
    err = max(abs(match.c - want["c"]), abs(match.map.a - want["a"]), abs(match.map.b - want["b"]))
    return err <= tol and match.k == want["k"], float(err)


@_suite("roundtrip")
def roundtrip_suite(seed: int = 1, trials: int = 1000, tol: float = 1e-6) -> dict:
    """Build random canonical operators and check classify recovers them."""
    checks = []
    for fi, form in enumerate(("Form1", "Form2", "Form3")):
        chk = _Check(f"{form}_roundtrip")
        worst = 0.0
        for t in range(trials):
            rng = np.random.default_rng([seed, fi, t])
            L, want = _random_form(rng, form)
            rep = classify(L)
            match = rep.match(form)
            repro = f"{PROG} classify --op {_inline(L.to_json())}"
            if match is None:
                chk.record(False, {"trial": t, "reason": f"no {form} match", "tags": sorted(rep.tags)}, repro)
                continue
            ok, err = _params_agree(form, match, want, tol)
            worst = max(worst, err)
            chk.record(ok, {"trial": t, "param_error": err}, repro)
        chk.stats["worst_param_error"] = worst
        checks.append(chk)
    return _summary("roundtrip", seed, checks)


@_suite("claim")
def claim_suite(seed: int = 1, trials: int = 20, tol: float = 1e-9) -> dict:
    """Claim solver on l = 3..6 plus the shifted-power basis nonsingularity test."""
    sol_chk = _Check("claim_two_solutions")
    for l in range(3, 7):
        for t in range(trials):
            rng = np.random.default_rng([seed, l, t])
            beta = complex(_annulus(rng, lo=0.2, hi=3.0))
            repro = f"{PROG} claim --l {l} --beta {beta.real!r},{beta.imag!r}"
            sols = claim_solutions(l, beta, seed=seed)
            expect = [(1, beta, 0), (-1, 0, beta)]
            ok = len(sols) == 2 and all(
                any(
                    abs(s.d - d) + abs(s.gamma - g) + abs(s.delta - e) <= 1e-6 * (1 + abs(beta))
                    and claim_residual(s, l, beta) <= tol
                    for s in sols
                )
                for d, g, e in expect
            )
            sol_chk.record(ok, {"l": l, "beta": [beta.real, beta.imag], "found": len(sols)}, repro)
    rej_chk = _Check("claim_rejects_l2")
    try:
        claim_solutions(2, 1.0)
        rej_chk.record(False, {"l": 2}, f"{PROG} claim --l 2 --beta 1,0")
    except PreconditionViolated:
        rej_chk.record(True)

    basis_chk = _Check("shifted_power_basis")
    for t in range(100):
        rng = np.random.default_rng([seed, 100, t])
        l = int(rng.integers(1, 7))
        lam = _annulus(rng, l + 1, lo=0.0, hi=1.0)
        _, flag = shifted_power_basis_matrix(lam, l)
        distinct = len(set(np.round(lam, 14))) == len(lam)
        basis_chk.record(flag == distinct, {"l": l, "lambdas": [[z.real, z.imag] for z in lam]})
    for t in range(20):
        rng = np.random.default_rng([seed, 200, t])
        l = int(rng.integers(1, 7))
        lam = _annulus(rng, l + 1, lo=0.0, hi=1.0)
        i, j = rng.choice(l + 1, size=2, replace=False)
        lam[j] = lam[i]
        _, flag = shifted_power_basis_matrix(lam, l)
        basis_chk.record(not flag, {"l": l, "lambdas": [[z.real, z.imag] for z in lam], "collision": True})
    return _summary("claim", seed, [sol_chk, rej_chk, basis_chk])


@_suite("dnk-dichotomy")
def dnk_dichotomy_suite(seed: int = 1, starts: int = 500, random_evals: int = 10_000) -> dict:
    """d(3,1) = 2/3, saturation for 2k <= n-2, strict separation otherwise."""
    d31 = _Check("d31_reproduction")
    est = estimate_dnk(3, 1, starts=200, seed=seed)
    reeval = ratio(from_roots(est.witness_roots), 1)
    ok = 2 / 3 - 1e-4 <= est.best_ratio <= 2 / 3 + 1e-3 and abs(reeval - est.best_ratio) <= 1e-8
    d31.record(ok, {"best_ratio": est.best_ratio, "reevaluated": reeval},
               f"{PROG} dnk --n 3 --k 1 --starts 200 --seed {seed}")
    d31.stats.update(best_ratio=est.best_ratio, reevaluated=reeval)

    sat = _Check("saturating_side")
    for n, k in ((4, 1), (5, 1), (6, 1), (6, 2)):
        e = estimate_dnk(n, k, starts=starts, seed=seed)
        sat.record(e.best_ratio >= 0.999, {"n": n, "k": k, "best_ratio": e.best_ratio},
                   f"{PROG} dnk --n {n} --k {k} --starts {starts} --seed {seed}")
        sat.stats[f"d({n},{k})"] = e.best_ratio

    strict = _Check("strict_side")
    for (n, k), bound in (((3, 1), 2 / 3 + 1e-3), ((4, 2), 1 - 1e-3)):
        rng = np.random.default_rng([seed, n, k])
        worst = 0.0
        for i in range(random_evals):
            m = int(rng.integers(k + 1, n + 1))
            roots = 3.0 * np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))
            try:
                worst = max(worst, ratio(from_roots(roots), k))
            except RootError:
                continue
        e = estimate_dnk(n, k, starts=starts, seed=seed, stop_at_one=False)
        worst = max(worst, e.best_ratio, max(e.history))
        strict.record(worst <= bound, {"n": n, "k": k, "max_ratio": worst, "bound": bound},
                      f"{PROG} dnk --n {n} --k {k} --starts {starts} --seed {seed}")
        strict.stats[f"max_ratio({n},{k})"] = worst
    return _summary("dnk-dichotomy", seed, [d31, sat, strict])


@_suite("adversarial")
def adversarial_suite(seed: int = 1, trials: int = 10_000) -> dict:
    """P_M diameters plus refutation of P(z/2) and non-refutation of P(2z), P'."""
    pm = _Check("P_M_diameter")
    for t in (1, 2, 3):
        for M in (10.0, 100.0, 1000.0):
            p = pm_polynomial(t, M)
            d = diameter(find_roots(p))
            want = 2 * math.sqrt(M)
            pm.record(abs(d - want) <= 1e-6 * want, {"t": t, "M": M, "diameter": d, "expected": want},
                      f"{PROG} diam --poly {_inline(p.to_json())}")

    refute = _Check("refutation")
    half = substitution_operator(4, AffineMap(0.5, 0))
    res = test_nonexpansive(half, trials=1, seed=seed)
    ok = res.found and res.trials == 0 and abs(res.ratio - 2.0) <= 1e-6
    refute.record(ok, {"operator": "P(z/2) on P_4", **res.to_json()},
                  f"{PROG} refute --op {_inline(half.to_json())} --trials 1 --seed {seed}")
    for label, L in (("P(2z) on P_4", substitution_operator(4, AffineMap(2.0, 0))),
                     ("P' on P_5", derivative_operator(5))):
        res = test_nonexpansive(L, trials=trials, seed=seed)
        refute.record(not res.found and res.skipped_solver == 0, {"operator": label, **res.to_json()},
                      f"{PROG} refute --op {_inline(L.to_json())} --trials {trials} --seed {seed}")
    return _summary("adversarial", seed, [pm, refute])


def run_suite(name: str, seed: int = 1, **overrides) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed, **overrides)
