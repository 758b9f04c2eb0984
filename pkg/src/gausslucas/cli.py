"""Command-line interface.

One JSON document goes to standard output; prose goes to standard error.
Exit status: 0 success, 1 domain error (reported as JSON), 2 I/O or parse
error.

Usage:
    gausslucas roots --poly '{"coeffs": [-1, 0, 1]}'
    gausslucas gauss-lucas --poly p.json --svg p.svg
    gausslucas classify --op op.json
    gausslucas refute --op op.json --trials 10000 --seed 3
    gausslucas dnk --n 3 --k 1 --starts 200 --seed 7 --csv d31.csv
    gausslucas suite gauss-lucas --seed 1
"""

from __future__ import annotations

import csv
import functools
import json
import sys
from pathlib import Path

import click

from . import extremal, geometry, operators, suites
from .poly import Polynomial, derivative, from_roots, parse_complex
from .roots import RootConfig, RootError, find_roots


class ParseError(Exception):
    pass


class DomainError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(obj, out: str | None):
    text = dumps(obj)
    click.echo(text)
    if out:
        Path(out).write_text(text + "\n")


def _load_json(arg: str):
    """Inline JSON (starting with '{' or '[') or a path to a JSON file."""
    try:
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        return json.loads(Path(arg).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read JSON from {arg!r}: {e}") from e


def load_poly(arg: str) -> Polynomial:
    try:
        return Polynomial.from_json(_load_json(arg))
    except ValueError as e:
        raise ParseError(str(e)) from e


def load_op(arg: str) -> operators.MonomialOperator:
    try:
        return operators.MonomialOperator.from_json(_load_json(arg))
    except (ValueError, TypeError) as e:
        raise ParseError(str(e)) from e


def command(fn):
    """Shared --out option plus error-to-exit-code mapping."""

    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write the JSON here.")
    @functools.wraps(fn)
    def wrapper(*args, out=None, **kwargs):
        try:
            result = fn(*args, **kwargs)
        except ParseError as e:
            click.echo(dumps({"error": "ParseError", "message": str(e)}))
            sys.exit(2)
        except OSError as e:
            click.echo(dumps({"error": "IOError", "message": str(e)}))
            sys.exit(2)
        except (RootError, ValueError, DomainError, KeyError) as e:
            click.echo(dumps({"error": type(e).__name__, "message": str(e)}))
            sys.exit(1)
        _emit(result, out)

    return wrapper


def root_options(fn):
    fn = click.option("--max-iter", default=200, show_default=True)(fn)
    fn = click.option("--residual-tol", default=1e-12, show_default=True)(fn)
    fn = click.option("--cluster-radius", default=1e-6, show_default=True)(fn)
    fn = click.option("--seed", default=0, show_default=True, help="Seed for initial root guesses.")(fn)
    return fn


def _config(max_iter, residual_tol, cluster_radius, seed) -> RootConfig:
    return RootConfig(max_iter=max_iter, residual_tol=residual_tol, cluster_radius=cluster_radius, seed=seed)


@click.group()
def main():
    """Zero-set geometry of complex polynomials and diameter-nonexpansive operators."""


@main.command()
@click.option("--poly", "poly", required=True, help="Polynomial JSON (inline or file).")
@root_options
@command
def roots(poly, max_iter, residual_tol, cluster_radius, seed):
    """Zeros of a polynomial with multiplicities."""
    p = load_poly(poly)
    return find_roots(p, _config(max_iter, residual_tol, cluster_radius, seed)).to_json()


@main.command()
@click.option("--poly", "poly", required=True)
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Scatter of Z(P) and its hull.")
@root_options
@command
def diam(poly, svg, max_iter, residual_tol, cluster_radius, seed):
    """Diameter of the zero set."""
    p = load_poly(poly)
    zs = find_roots(p, _config(max_iter, residual_tol, cluster_radius, seed))
    if svg:
        from .plotting import plot_zero_sets

        plot_zero_sets(zs.centers, path=svg)
    return {"diameter": geometry.diameter(zs), "roots": zs.to_json()}


@main.command()
@click.option("--poly", "poly", required=True)
@click.option("--svg", type=click.Path(dir_okay=False), default=None)
@root_options
@command
def hull(poly, svg, max_iter, residual_tol, cluster_radius, seed):
    """Convex hull of the zero set."""
    p = load_poly(poly)
    zs = find_roots(p, _config(max_iter, residual_tol, cluster_radius, seed))
    h = geometry.convex_hull(zs.centers)
    if svg:
        from .plotting import plot_zero_sets

        plot_zero_sets(zs.centers, hull=h, path=svg)
    return {"hull": h.to_json(), "roots": zs.to_json()}


@main.command("gauss-lucas")
@click.option("--poly", "poly", required=True)
@click.option("--tol", default=1e-7, show_default=True)
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Z(P) circles, Z(P') crosses, hull.")
@root_options
@command
def gauss_lucas(poly, tol, svg, max_iter, residual_tol, cluster_radius, seed):
    """Check that the zeros of P' lie in the convex hull of the zeros of P."""
    p = load_poly(poly)
    rep = geometry.gauss_lucas_check(p, tol, _config(max_iter, residual_tol, cluster_radius, seed))
    if svg:
        from .plotting import plot_zero_sets

        plot_zero_sets(rep.roots.centers, rep.critical_points.centers, rep.hull, path=svg)
    return rep.to_json()


@main.command()
@click.option("--op", "op", required=True, help="Operator JSON {n, images} (inline or file).")
@click.option("--tol", default=1e-8, show_default=True)
@command
def classify(op, tol):
    """Match an operator against the three canonical forms."""
    return operators.classify(load_op(op), tol=tol).to_json()


@main.command()
@click.option("--op", "op", required=True)
@click.option("--trials", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--tol", default=1e-7, show_default=True)
@command
def refute(op, trials, seed, tol):
    """Randomized search for a diameter-increasing polynomial."""
    return operators.test_nonexpansive(load_op(op), trials=trials, seed=seed, tol=tol).to_json()


@main.command()
@click.option("--op", "op", required=True)
@click.option("--alphas", default=20, show_default=True, help="Size of the shift grid.")
@command
def probe(op, alphas):
    """Single-zero probe on images of (z + alpha)^s."""
    grid = operators.default_alpha_grid(alphas)
    return operators.single_zero_probe(load_op(op), grid).to_json()


@main.command()
@click.option("--l", "l", type=int, required=True)
@click.option("--beta", required=True, help="Complex number as 're,im'.")
@click.option("--seed", default=0, show_default=True)
@command
def claim(l, beta, seed):
    """All (d, gamma, delta) with (w+beta)^l - w^l = d[(w+gamma)^l - (w+delta)^l]."""
    try:
        b = parse_complex([float(v) for v in beta.split(",")]) if "," in beta else complex(float(beta))
    except ValueError as e:
        raise ParseError(f"bad --beta {beta!r}") from e
    sols = operators.claim_solutions(l, b, seed=seed)
    return {
        "l": l,
        "beta": [b.real, b.imag],
        "solutions": [dict(s.to_json(), residual=operators.claim_residual(s, l, b)) for s in sols],
    }


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(extremal.CSV_HEADER)
        for r in rows:
            w.writerow(r.csv_row())


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--starts", default=200, show_default=True)
@click.option("--local-iters", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Witness zeros and derivative zeros.")
@command
def dnk(n, k, starts, local_iters, seed, csv_path, svg):
    """Lower bound for d(n,k) with a witness root configuration."""
    est = extremal.estimate_dnk(n, k, starts=starts, local_iters=local_iters, seed=seed)
    if csv_path:
        _write_csv(csv_path, [est])
    if svg:
        from .plotting import plot_witness

        dk = derivative(from_roots(est.witness_roots), k)
        plot_witness(est, find_roots(dk).centers if dk.degree >= 1 else [], svg)
    return est.to_json()


@main.command("dnk-table")
@click.option("--n-max", type=int, required=True)
@click.option("--starts", default=200, show_default=True)
@click.option("--local-iters", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Ratio-versus-n figure.")
@command
def dnk_table(n_max, starts, local_iters, seed, csv_path, svg):
    """d(n,k) lower bounds for every valid (n,k) with n <= N."""
    rows = extremal.dnk_table(n_max, starts=starts, local_iters=local_iters, seed=seed)
    if csv_path:
        _write_csv(csv_path, rows)
    if svg:
        from .plotting import plot_dnk_table

        plot_dnk_table(rows, svg)
    return {"rows": [r.to_json() for r in rows]}


@main.command()
@click.argument("name", type=click.Choice(sorted(suites.SUITES)))
@click.option("--seed", default=1, show_default=True)
@click.option("--trials", type=int, default=None, help="Override the documented trial count.")
@command
def suite(name, seed, trials):
    """Run a seeded property suite."""
    kw = {}
    if trials is not None:
        kw["starts" if name == "dnk-dichotomy" else "trials"] = trials
    res = suites.run_suite(name, seed=seed, **kw)
    click.echo(f"suite {name}: {'pass' if res['pass'] else 'FAIL'}", err=True)
    return res


if __name__ == "__main__":
    main()
