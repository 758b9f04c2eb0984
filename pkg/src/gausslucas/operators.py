"""Linear operators on polynomials of degree <= n, stored by monomial images.

``MonomialOperator.images[j]`` is the image of ``z**j``.  The range is all of
C[z], so images may have degree larger than ``n``.

The three diameter-nonexpansive families are built by :func:`make_form1`,
:func:`make_form2` and :func:`make_form3`; :func:`classify` recognizes them,
:func:`test_nonexpansive` searches for counterexample polynomials and
:func:`single_zero_probe` checks the necessary condition that every image of
a shifted power ``(z + alpha)**s`` has at most one distinct zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .geometry import zero_set_diameter
from .poly import (
    AffineMap,
    Polynomial,
    compose_affine,
    degree,
    derivative,
    from_roots,
    linear_combination,
    shifted_power,
)
from .roots import (
    DEFAULT_CONFIG,
    MULTIPLE_ROOT_CONFIG,
    RootConfig,
    RootError,
    distinct_zero_count,
    find_roots,
    is_perfect_power,
)

STRUCTURALLY_NONEXPANSIVE = "StructurallyNonexpansive"
CONDITION_VIOLATED = "ConditionViolated"
NO_CANONICAL_FORM = "NoCanonicalForm"

NOT_A_CERTIFICATE = (
    "NoCounterexampleFound is a statistical statement from randomized search, "
    "never a certificate of nonexpansiveness."
)


class OperatorError(ValueError):
    pass


class DegreeExceedsN(OperatorError):
    pass


class PreconditionViolated(OperatorError):
    pass


@dataclass(frozen=True)
class LinearFunctional:
    """l(P) = sum_j weights[j] * coeff_j(P)."""

    weights: tuple[complex, ...]

    def __init__(self, weights: Sequence[complex]):
        object.__setattr__(self, "weights", tuple(complex(w) for w in weights))

    @classmethod
    def unit(cls, j: int, n: int) -> "LinearFunctional":
        w = [0j] * (n + 1)
        w[j] = 1.0
        return cls(w)

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    def __call__(self, p: Polynomial) -> complex:
        c = p.coeffs
        return complex(sum(w * c[j] for j, w in enumerate(self.weights) if j < len(c)))

    def is_zero(self) -> bool:
        return all(w == 0 for w in self.weights)

    def to_json(self) -> list:
        return [[w.real, w.imag] for w in self.weights]


@dataclass(frozen=True)
class MonomialOperator:
    n: int
    images: tuple[Polynomial, ...]

    def __init__(self, n: int, images: Sequence[Polynomial]):
        images = tuple(images)
        if n < 0 or len(images) != n + 1:
            raise OperatorError(f"operator on degree <= {n} needs {n + 1} images, got {len(images)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "images", images)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def scale(self) -> float:
        return max((im.scale() for im in self.images), default=0.0)

    def to_json(self) -> dict:
        return {"n": self.n, "images": [im.to_json() for im in self.images]}

    @classmethod
    def from_json(cls, obj) -> "MonomialOperator":
        if not isinstance(obj, dict) or "n" not in obj or "images" not in obj:
            raise OperatorError("operator JSON needs 'n' and 'images'")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise OperatorError("'n' must be an integer")
        return cls(n, [Polynomial.from_json(im) for im in obj["images"]])

    @classmethod
    def from_callable(cls, n: int, f: Callable[[Polynomial], Polynomial]) -> "MonomialOperator":
        return cls(n, [f(Polynomial.monomial(j)) for j in range(n + 1)])


def apply(L: MonomialOperator, p: Polynomial) -> Polynomial:
    d = degree(p)
    if d > L.n:
        raise DegreeExceedsN(f"input degree {d} exceeds operator bound n={L.n}")
    return linear_combination((p.coeff(j), L.images[j]) for j in range(d + 1))


def identity_operator(n: int) -> MonomialOperator:
    return MonomialOperator(n, [Polynomial.monomial(j) for j in range(n + 1)])


def derivative_operator(n: int, k: int = 1) -> MonomialOperator:
    return MonomialOperator.from_callable(n, lambda p: derivative(p, k))


def substitution_operator(n: int, m: AffineMap) -> MonomialOperator:
    """L[P] = P(a z + b)."""
    return MonomialOperator.from_callable(n, lambda p: compose_affine(p, m))


def zero_operator(n: int) -> MonomialOperator:
    return MonomialOperator(n, [Polynomial.zero()] * (n + 1))


# --- canonical forms -------------------------------------------------------

def _check_len(l: LinearFunctional, n: int, name: str):
    if len(l.weights) != n + 1:
        raise OperatorError(f"{name} has {len(l.weights)} weights, expected {n + 1}")


def make_form1(l1: LinearFunctional, l2: LinearFunctional, n: int) -> MonomialOperator:
    """L = z*l1 + l2."""
    _check_len(l1, n, "l1")
    _check_len(l2, n, "l2")
    return MonomialOperator(n, [Polynomial([l2.weights[j], l1.weights[j]]).trim() for j in range(n + 1)])


def make_form2(c: complex, m: int, l3: LinearFunctional, n: int) -> MonomialOperator:
    """L = (z - c)**m * l3 with m >= 2 and l3 != 0."""
    _check_len(l3, n, "l3")
    if m < 2:
        raise OperatorError("form 2 needs m >= 2")
    if l3.is_zero():
        raise OperatorError("form 2 needs a nonzero functional")
    base = from_roots([c] * m)
    return MonomialOperator(n, [(w * base).trim() for w in l3.weights])


def make_form3(c: complex, k: int, m: AffineMap, n: int) -> MonomialOperator:
    """L[P] = c * (P(a z + b))^(k) with c != 0, a != 0, 0 <= k <= n - 2."""
    if c == 0:
        raise OperatorError("form 3 needs c != 0")
    if not m.invertible:
        raise OperatorError("form 3 needs an invertible affine map")
    if not 0 <= k <= n - 2:
        raise OperatorError(f"form 3 needs 0 <= k <= n-2, got k={k}, n={n}")
    return MonomialOperator(
        n, [(c * derivative(compose_affine(Polynomial.monomial(j), m), k)).trim() for j in range(n + 1)]
    )


# --- classification --------------------------------------------------------

@dataclass(frozen=True)
class Form1Match:
    l1: LinearFunctional
    l2: LinearFunctional
    tag: str = "Form1"

    def to_json(self) -> dict:
        return {"form": self.tag, "l1": self.l1.to_json(), "l2": self.l2.to_json()}


@dataclass(frozen=True)
class Form2Match:
    c: complex
    m: int
    l3: LinearFunctional
    tag: str = "Form2"

    def to_json(self) -> dict:
        return {"form": self.tag, "c": [self.c.real, self.c.imag], "m": self.m, "l3": self.l3.to_json()}


@dataclass(frozen=True)
class Form3Match:
    c: complex
    k: int
    map: AffineMap
    tag: str = "Form3"

    def to_json(self) -> dict:
        a, b = complex(self.map.a), complex(self.map.b)
        return {
            "form": self.tag,
            "c": [self.c.real, self.c.imag],
            "k": self.k,
            "a": [a.real, a.imag],
            "b": [b.real, b.imag],
            "abs_a": abs(a),
        }


@dataclass(frozen=True)
class DnkValue:
    value: float
    provenance: str  # "exact" or "estimated lower bound"

    def to_json(self) -> dict:
        return {"value": self.value, "provenance": self.provenance}


@dataclass
class FormReport:
    matches: list = field(default_factory=list)
    verdict: str = NO_CANONICAL_FORM
    detail: str = ""
    dnk_used: DnkValue | None = None
    conditional: bool = False

    def match(self, tag: str):
        return next((m for m in self.matches if m.tag == tag), None)

    @property
    def tags(self) -> set[str]:
        return {m.tag for m in self.matches}

    def to_json(self) -> dict:
        return {
            "matches": [m.to_json() for m in self.matches],
            "verdict": self.verdict,
            "detail": self.detail,
            "conditional": self.conditional,
            "dnk_used": self.dnk_used.to_json() if self.dnk_used else None,
        }


def _coeffs_padded(p: Polynomial, size: int) -> np.ndarray:
    out = np.zeros(size, complex)
    c = p.coeffs[:size]
    out[: len(c)] = c
    return out


def _match_form1(L: MonomialOperator, thresh: float):
    for im in L.images:
        if np.any(np.abs(im.coeffs[2:]) > thresh):
            return None
    return Form1Match(
        LinearFunctional([im.coeff(1) for im in L.images]),
        LinearFunctional([im.coeff(0) for im in L.images]),
    )


def _match_form2(L: MonomialOperator, thresh: float):
    first = next((im for im in L.images if np.any(np.abs(im.coeffs) > thresh)), None)
    if first is None:
        return None
    m = int(np.nonzero(np.abs(first.coeffs) > thresh)[0][-1])
    if m < 2:
        return None
    flag, c, _ = is_perfect_power(first.trim(), rtol=thresh / max(first.scale(), 1e-300))
    if not flag:
        return None
    base = _coeffs_padded(from_roots([c] * m), max(len(im) for im in L.images))
    size = len(base)
    norm2 = float(np.vdot(base, base).real)
    weights = []
    for im in L.images:
        v = _coeffs_padded(im, max(size, len(im)))
        if len(v) > size and np.any(np.abs(v[size:]) > thresh):
            return None
        v = v[:size]
        lam = np.vdot(base, v) / norm2
        if np.max(np.abs(v - lam * base)) > thresh:
            return None
        weights.append(complex(lam))
    return Form2Match(complex(c), m, LinearFunctional(weights))


def _match_form3(L: MonomialOperator, thresh: float):
    n = L.n
    nz = [j for j, im in enumerate(L.images) if np.any(np.abs(im.coeffs) > thresh)]
    if not nz:
        return None
    k = nz[0]
    if k > n - 2:
        return None
    g0 = L.images[k].coeff(0)
    if np.any(np.abs(L.images[k].coeffs[1:]) > thresh) or g0 == 0:
        return None
    nxt = L.images[k + 1]
    if np.any(np.abs(nxt.coeffs[2:]) > thresh):
        return None
    a = nxt.coeff(1) / ((k + 1) * g0)
    b = nxt.coeff(0) / ((k + 1) * g0)
    if abs(a) == 0:
        return None
    c = g0 / (factorial(k) * a**k)
    cand = make_form3(c, k, AffineMap(a, b), n)
    for got, want in zip(L.images, cand.images):
        size = max(len(got), len(want))
        if np.max(np.abs(_coeffs_padded(got, size) - _coeffs_padded(want, size)), initial=0.0) > thresh:
            return None
    return Form3Match(complex(c), k, AffineMap(complex(a), complex(b)))


def classify(
    L: MonomialOperator,
    tol: float = 1e-8,
    dnk_source: Callable[[int, int], DnkValue] | None = None,
) -> FormReport:
    """Match ``L`` against the three canonical forms.

    ``tol`` is relative to the largest image coefficient.  ``dnk_source``
    supplies d(n,k) for the Form3 slope condition; the default uses exact
    values where known and a cached numerical lower bound otherwise.
    """
    if dnk_source is None:
        from .extremal import default_dnk

        dnk_source = default_dnk
    scale = L.scale()
    report = FormReport()
    if scale == 0.0:
        zero = LinearFunctional([0j] * (L.n + 1))
        report.matches.append(Form1Match(zero, zero))
        report.verdict = STRUCTURALLY_NONEXPANSIVE
        report.detail = "zero operator"
        return report
    thresh = tol * scale
    for matcher in (_match_form1, _match_form2, _match_form3):
        m = matcher(L, thresh)
        if m is not None:
            report.matches.append(m)
    if report.match("Form1") or report.match("Form2"):
        report.verdict = STRUCTURALLY_NONEXPANSIVE
        return report
    f3 = report.match("Form3")
    if f3 is None:
        report.verdict = NO_CANONICAL_FORM
        return report
    d = dnk_source(L.n, f3.k)
    report.dnk_used = d
    slope = abs(f3.map.a)
    if slope < d.value - 1e-12:
        report.verdict = CONDITION_VIOLATED
        report.detail = f"|a| = {slope:.12g} < d({L.n},{f3.k}) = {d.value:.12g} ({d.provenance})"
    else:
        report.verdict = STRUCTURALLY_NONEXPANSIVE
        # a lower bound for d(n,k) cannot certify |a| >= d(n,k) unless |a| >= 1
        report.conditional = d.provenance != "exact" and slope < 1.0
        if report.conditional:
            report.detail = (
                f"|a| = {slope:.12g} >= estimated lower bound {d.value:.12g}; "
                "verdict conditional on the true d(n,k)"
            )
    return report


# --- counterexample search -------------------------------------------------

@dataclass(frozen=True)
class SamplerConfig:
    root_fraction: float = 0.5
    root_disk_radius: float = 2.0


def default_alpha_grid(count: int = 20) -> list[complex]:
    """Deterministic shifts on rings of radius 0.5, 1, 2, 4 (count/4 angles each)."""
    per = max(1, count // 4)
    out = []
    for ring, r in enumerate((0.5, 1.0, 2.0, 4.0)):
        for i in range(per):
            out.append(complex(r * np.exp(1j * (2 * np.pi * i / per + 0.3 * ring + 0.1))))
    return out[:count]


def adversarial_family(n: int, alpha_grid: Sequence[complex] | None = None) -> list[tuple[str, Polynomial]]:
    """Shifted powers (z+alpha)^s, s <= n, then z^(t+1) - M z^(t-1), t <= n-1."""
    grid = default_alpha_grid() if alpha_grid is None else alpha_grid
    out = []
    for s in range(1, n + 1):
        for a in grid:
            out.append((f"shifted_power s={s} alpha={a!r}", shifted_power(a, s)))
    for t in range(1, n):
        for M in (10.0, 100.0, 1000.0):
            out.append((f"P_M t={t} M={M:g}", pm_polynomial(t, M)))
    return out


def pm_polynomial(t: int, M: complex) -> Polynomial:
    """z^(t+1) - M z^(t-1)."""
    c = np.zeros(t + 2, complex)
    c[t + 1] = 1.0
    c[t - 1] = -M
    return Polynomial(c)


def sample_polynomial(
    rng: np.random.Generator, n: int, cfg: SamplerConfig = SamplerConfig(), min_degree: int = 1
) -> Polynomial:
    """Random zeros in a disk or i.i.d. complex Gaussian coefficients; degree uniform in [min_degree, n]."""
    d = int(rng.integers(min_degree, n + 1))
    if rng.uniform() < cfg.root_fraction:
        r = cfg.root_disk_radius * np.sqrt(rng.uniform(size=d))
        return from_roots(r * np.exp(2j * np.pi * rng.uniform(size=d)))
    c = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    return Polynomial(c)


@dataclass
class NonexpansiveResult:
    found: bool
    polynomial: Polynomial | None = None
    diam_p: float | None = None
    diam_lp: float | None = None
    source: str = ""
    trials: int = 0
    adversarial: int = 0
    skipped_constant: int = 0
    skipped_solver: int = 0

    @property
    def status(self) -> str:
        return "Counterexample" if self.found else "NoCounterexampleFound"

    @property
    def ratio(self) -> float | None:
        if not self.found or not self.diam_p:
            return None
        return self.diam_lp / self.diam_p

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "trials": self.trials,
            "adversarial_cases": self.adversarial,
            "skipped_constant": self.skipped_constant,
            "skipped_solver": self.skipped_solver,
        }
        if self.found:
            out.update(
                polynomial=self.polynomial.to_json(),
                diam_p=self.diam_p,
                diam_lp=self.diam_lp,
                ratio=self.ratio,
                source=self.source,
            )
        else:
            out["note"] = NOT_A_CERTIFICATE
        return out


def test_nonexpansive(
    L: MonomialOperator,
    trials: int = 1000,
    sampler: SamplerConfig = SamplerConfig(),
    tol: float = 1e-7,
    seed: int = 0,
    alpha_grid: Sequence[complex] | None = None,
    config: RootConfig = DEFAULT_CONFIG,
) -> NonexpansiveResult:
    """Search for p with diam Z(L[p]) > diam Z(p) (both nonconstant).

    The adversarial batch runs first, then ``trials`` random polynomials with
    per-trial seeds.  ``tol`` is scaled by ``max(1, diam Z(p))``.  Trials
    where the root solver fails are counted as skipped, never as passes.
    """
    if trials < 1:
        raise PreconditionViolated("trials must be >= 1")
    res = NonexpansiveResult(found=False)

    def check(p: Polynomial, source: str) -> bool:
        lp = apply(L, p)
        if degree(p) < 1 or degree(lp) < 1:
            res.skipped_constant += 1
            return False
        try:
            dp = zero_set_diameter(p, config=config)
            dl = zero_set_diameter(lp, config=config)
        except RootError:
            res.skipped_solver += 1
            return False
        if dl > dp + tol * max(1.0, dp):
            res.found = True
            res.polynomial, res.diam_p, res.diam_lp, res.source = p, dp, dl, source
            return True
        return False

    for label, p in adversarial_family(L.n, alpha_grid):
        res.adversarial += 1
        if check(p, f"adversarial {label}"):
            return res
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        res.trials += 1
        if check(sample_polynomial(rng, L.n, sampler), f"random trial {t} seed {seed}"):
            return res
    return res


# pytest would otherwise collect the library function when imported into tests
test_nonexpansive.__test__ = False


@dataclass
class ProbeResult:
    violations: list[tuple[int, complex, int]]
    skipped: list[tuple[int, complex, str]]
    checked: int

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "violations": [
                {"s": s, "alpha": [a.real, a.imag], "distinct_zeros": cnt} for s, a, cnt in self.violations
            ],
            "skipped": [{"s": s, "alpha": [a.real, a.imag], "error": e} for s, a, e in self.skipped],
            "note": "zero violations is necessary, not sufficient, for nonexpansiveness",
        }


def single_zero_probe(
    L: MonomialOperator,
    alpha_grid: Sequence[complex] | None = None,
    config: RootConfig = MULTIPLE_ROOT_CONFIG,
) -> ProbeResult:
    """Flag (s, alpha) where L[(z+alpha)^s] has two or more distinct zeros."""
    grid = default_alpha_grid() if alpha_grid is None else list(alpha_grid)
    violations, skipped, checked = [], [], 0
    for s in range(L.n + 1):
        for a in grid:
            a = complex(a)
            img = linear_combination((comb(s, j) * a**j, L.images[s - j]) for j in range(s + 1))
            checked += 1
            try:
                cnt = distinct_zero_count(img, config)
            except RootError as e:
                skipped.append((s, a, str(e)))
                continue
            if cnt >= 2:
                violations.append((s, a, cnt))
    return ProbeResult(violations, skipped, checked)


# --- the uniqueness claim for differences of l-th powers ------------------

@dataclass(frozen=True)
class ClaimSolution:
    d: complex
    gamma: complex
    delta: complex

    def to_json(self) -> dict:
        return {k: [v.real, v.imag] for k, v in (("d", self.d), ("gamma", self.gamma), ("delta", self.delta))}


def claim_residual(sol: ClaimSolution, l: int, beta: complex) -> float:
    """Max scaled residual of (w+beta)^l - w^l - d[(w+gamma)^l - (w+delta)^l] at w = 0..l."""
    worst = 0.0
    for w in range(l + 1):
        lhs = (w + beta) ** l - w**l
        rhs = sol.d * ((w + sol.gamma) ** l - (w + sol.delta) ** l)
        scale = (w + abs(beta) + 1.0) ** l
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _newton_polish(d: complex, g: complex, e: complex, beta: complex, steps: int = 40):
    """Newton on the square system beta^j = d (g^j - e^j), j = 1, 2, 3."""
    v = np.array([d, g, e], dtype=np.complex128)
    js = np.arange(1, 4)
    for _ in range(steps):
        d, g, e = v
        f = d * (g**js - e**js) - beta**js
        jac = np.column_stack([g**js - e**js, d * js * g ** (js - 1), -d * js * e ** (js - 1)])
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            break
        v = v - step
        if not np.all(np.isfinite(v)):
            return None
        if np.max(np.abs(step)) <= 1e-15 * (1 + np.max(np.abs(v))):
            break
    return ClaimSolution(complex(v[0]), complex(v[1]), complex(v[2]))


def claim_solutions(
    l: int, beta: complex, seed: int = 0, starts: int = 24, tol: float = 1e-9
) -> list[ClaimSolution]:
    """All (d, gamma, delta) with (w+beta)^l - w^l == d[(w+gamma)^l - (w+delta)^l].

    Coefficient matching gives beta^j = d (gamma^j - delta^j) for j = 1..l;
    this system is solved by seeded multi-start least squares in six real
    unknowns, keeping solutions whose identity residual is <= ``tol``.
    """
    beta = complex(beta)
    if l < 3:
        raise PreconditionViolated("the identity has a unique solution pair only for l >= 3")
    if beta == 0:
        raise PreconditionViolated("beta must be nonzero")
    js = np.arange(1, l + 1)
    target = beta**js
    scale = np.abs(beta) ** js

    def resid(x):
        d, g, e = complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5])
        r = (d * (g**js - e**js) - target) / scale
        return np.concatenate([r.real, r.imag])

    rng = np.random.default_rng([seed, l])
    found: list[ClaimSolution] = []
    for _ in range(starts):
        d0 = rng.normal() + 1j * rng.normal()
        g0, e0 = abs(beta) * 1.5 * (rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2))
        x0 = np.array([d0.real, d0.imag, g0.real, g0.imag, e0.real, e0.imag])
        sol = least_squares(resid, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
        x = sol.x
        if not np.all(np.isfinite(x)):
            continue
        cand = _newton_polish(complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5]), beta)
        if cand is None or claim_residual(cand, l, beta) > tol:
            continue
        if any(
            abs(cand.d - f.d) + abs(cand.gamma - f.gamma) + abs(cand.delta - f.delta) < 1e-6 * (1 + abs(beta))
            for f in found
        ):
            continue
        found.append(cand)
    found.sort(key=lambda s: (-round(s.d.real, 6), round(s.gamma.real, 6), round(s.gamma.imag, 6)))
    return found


def shifted_power_basis_matrix(lambdas: Sequence[complex], l: int, rtol: float = 1e-10) -> tuple[np.ndarray, bool]:
    """Rows are the monomial coefficients of (w + lambda_i)^l.

    Nonsingular when the matrix is square and its smallest singular value
    exceeds ``rtol`` times the largest.
    """
    lam = np.asarray(lambdas, dtype=np.complex128)
    mat = np.array([[comb(l, j) * x ** (l - j) for j in range(l + 1)] for x in lam], dtype=np.complex128)
    if mat.shape[0] != l + 1:
        return mat, False
    sv = np.linalg.svd(mat, compute_uv=False)
    return mat, bool(sv[-1] > rtol * sv[0])
