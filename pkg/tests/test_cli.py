import csv
import json

import pytest
from click.testing import CliRunner

from gausslucas.cli import main
from gausslucas.extremal import CSV_HEADER
from gausslucas.operators import MonomialOperator, derivative_operator, make_form2, LinearFunctional
from gausslucas.poly import Polynomial, from_roots


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        res = runner.invoke(main, [str(a) for a in args])
        return res.exit_code, res.stdout

    return invoke


def poly_arg(p):
    return json.dumps(p.to_json())


def test_roots(run):
    code, out = run("roots", "--poly", '{"coeffs": [-1, 0, 1]}')
    assert code == 0
    pts = json.loads(out)["points"]
    assert sorted(p["re"] for p in pts) == pytest.approx([-1, 1])


def test_gauss_lucas_fifth_power(run, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(poly_arg(Polynomial([0, 0, 0, 0, 0, 1])))
    code, out = run("gauss-lucas", "--poly", path)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True and doc["margins"] == [0.0]


def test_classify_derivative(run, tmp_path):
    path = tmp_path / "deriv5.json"
    path.write_text(json.dumps(derivative_operator(5).to_json()))
    code, out = run("classify", "--op", path)
    m = [x for x in json.loads(out)["matches"] if x["form"] == "Form3"][0]
    assert code == 0 and m["k"] == 1 and m["a"] == [1.0, 0.0]


def test_dnk_seed7(run, tmp_path):
    csv_path = tmp_path / "d31.csv"
    code, out = run("dnk", "--n", 3, "--k", 1, "--starts", 200, "--seed", 7, "--csv", csv_path)
    doc = json.loads(out)
    assert code == 0 and doc["best_ratio"] == pytest.approx(2 / 3, abs=1e-3)
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == CSV_HEADER
    assert float(rows[1][2]) == doc["best_ratio"]
    assert rows[1][3] == "EXACT"
    assert len(rows[1][5].split(";")) == 3


def test_dnk_table_csv(run, tmp_path):
    csv_path = tmp_path / "t.csv"
    code, out = run("dnk-table", "--n-max", 3, "--starts", 20, "--csv", csv_path)
    assert code == 0
    assert [r[:2] for r in csv.reader(csv_path.open())][1:] == [["2", "0"], ["3", "0"], ["3", "1"]]


def test_refute_half(run):
    op = json.dumps({"n": 2, "images": [{"coeffs": [1]}, {"coeffs": [0, 0.5]}, {"coeffs": [0, 0, 0.25]}]})
    code, out = run("refute", "--op", op, "--trials", 5)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "Counterexample"
    assert doc["ratio"] == pytest.approx(2.0, abs=1e-6)


def test_probe(run):
    op = json.dumps(make_form2(2, 2, LinearFunctional([1, 1]), 1).to_json())
    code, out = run("probe", "--op", op, "--alphas", 8)
    assert code == 0 and json.loads(out)["violations"] == []


def test_claim(run):
    code, out = run("claim", "--l", 3, "--beta", "1,0")
    sols = json.loads(out)["solutions"]
    assert code == 0 and len(sols) == 2
    assert all(s["residual"] <= 1e-9 for s in sols)


def test_claim_domain_error(run):
    code, out = run("claim", "--l", 2, "--beta", "1,0")
    assert code == 1 and json.loads(out)["error"] == "PreconditionViolated"


def test_constant_is_domain_error(run):
    code, out = run("roots", "--poly", '{"coeffs": [5]}')
    assert code == 1 and json.loads(out)["error"] == "ConstantPolynomial"


@pytest.mark.parametrize("arg", ['{"coeffs": [1, ', '{"coeff": [1]}', "/no/such/file.json"])
def test_parse_errors(run, arg):
    code, out = run("diam", "--poly", arg)
    assert code == 2 and "error" in json.loads(out)


def test_wrong_arity(run):
    code, out = run("classify", "--op", '{"n": 3, "images": [{"coeffs": [1]}]}')
    assert code == 2 and json.loads(out)["error"] == "ParseError"


def test_out_file_matches_stdout(run, tmp_path):
    out_path = tmp_path / "o.json"
    code, out = run("diam", "--poly", poly_arg(from_roots([0, 3, 4j])), "--out", out_path)
    assert code == 0 and out_path.read_text() == out
    assert json.loads(out)["diameter"] == pytest.approx(5.0)


def test_emitted_json_reparses(run):
    L = derivative_operator(3)
    assert MonomialOperator.from_json(L.to_json()) == L
    code, out = run("roots", "--poly", poly_arg(from_roots([1j, 1j, 2])), "--cluster-radius", 1e-3)
    pts = json.loads(out)["points"]
    rebuilt = from_roots([complex(p["re"], p["im"]) for p in pts for _ in range(p["multiplicity"])])
    assert rebuilt.allclose(from_roots([1j, 1j, 2]), rtol=1e-9)


@pytest.mark.parametrize("cmd", ["hull", "gauss-lucas", "diam"])
def test_svg_deterministic(run, tmp_path, cmd):
    p = poly_arg(from_roots([1, -1, 1j, 0.2]))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    code_a, out_a = run(cmd, "--poly", p, "--svg", a)
    code_b, out_b = run(cmd, "--poly", p, "--svg", b)
    assert code_a == code_b == 0 and out_a == out_b
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().lstrip().startswith("<?xml")


def test_dnk_svg(run, tmp_path):
    svg = tmp_path / "w.svg"
    code, _ = run("dnk", "--n", 4, "--k", 2, "--starts", 5, "--svg", svg)
    assert code == 0 and "<svg" in svg.read_text()


def test_byte_identical_runs(run):
    first = run("dnk", "--n", 4, "--k", 2, "--starts", 6, "--seed", 3)
    second = run("dnk", "--n", 4, "--k", 2, "--starts", 6, "--seed", 3)
    assert first == second


def test_suite_small_override(run):
    code, out = run("suite", "gauss-lucas", "--seed", 2, "--trials", 25)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["checks"][0]["total"] == 25


def test_suite_unknown(run):
    code, _ = run("suite", "nope")
    assert code == 2
