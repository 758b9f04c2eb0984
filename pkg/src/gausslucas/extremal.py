"""Lower bounds for d(n,k) = sup diam Z(P^(k)) / diam Z(P) over 0 < deg P - k, deg P <= n.

The ratio is invariant under z -> a z + b, so the search pins two roots at
0 and 1 and runs Nelder-Mead over the remaining roots.  Every reported value
is recomputed from its witness root configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .geometry import diameter, zero_set_diameter
from .poly import Polynomial, degree, derivative, from_roots
from .roots import DEFAULT_CONFIG, RootConfig, RootError

EXACT = "EXACT"
ESTIMATE = "ESTIMATE"


class DegreeTooLow(ValueError):
    pass


class InvalidRange(ValueError):
    pass


def exact_dnk(n: int, k: int) -> float | None:
    """Known closed-form values: 1 when 2k <= n-2, and 2/3 at (3, 1)."""
    if 2 * k <= n - 2:
        return 1.0
    if (n, k) == (3, 1):
        return float(Fraction(2, 3))
    return None


def ratio(p: Polynomial, k: int, config: RootConfig = DEFAULT_CONFIG) -> float:
    """diam Z(p^(k)) / diam Z(p); 0 when all zeros of p coincide."""
    d = degree(p)
    if d < max(k + 1, 1):
        raise DegreeTooLow(f"need degree >= {max(k + 1, 1)}, got {d}")
    den = zero_set_diameter(p, config=config)
    if den == 0.0:
        return 0.0
    return zero_set_diameter(derivative(p, k), config=config) / den


def _ratio_of_roots(roots: np.ndarray, k: int, config: RootConfig) -> float:
    den = diameter(roots)
    if den == 0.0:
        return 0.0
    try:
        return zero_set_diameter(derivative(from_roots(roots), k), config=config) / den
    except RootError:
        return 0.0


def _chart(x: np.ndarray) -> np.ndarray:
    """Real parameters -> roots [0, 1, x0 + i x1, ...]."""
    return np.concatenate([[0.0, 1.0], x[0::2] + 1j * x[1::2]]).astype(np.complex128)


def _normalize(roots: np.ndarray) -> np.ndarray:
    """Affine image of ``roots`` with a farthest pair sent to 0 and 1.

    The ratio is affine-invariant, so this only changes how a witness reads:
    the search may drift toward a root far away, which this maps back into
    the unit scale.
    """
    d = np.abs(roots[:, None] - roots[None, :])
    i, j = np.unravel_index(np.argmax(d), d.shape)
    if d[i, j] == 0:
        return roots
    i, j = min(i, j), max(i, j)
    out = (roots - roots[i]) / (roots[j] - roots[i])
    out[i], out[j] = 0.0, 1.0
    return out


def _encode(roots: Sequence[complex]) -> tuple:
    return tuple((round(r.real, 12), round(r.imag, 12)) for r in roots)


@dataclass
class ExtremalEstimate:
    n: int
    k: int
    best_ratio: float
    witness_roots: list[complex]
    degree_used: int
    starts: int
    seed: int
    converged_fraction: float
    starts_requested: int = 0
    history: list[float] = field(default_factory=list, repr=False)

    @property
    def exactness(self) -> str:
        return EXACT if exact_dnk(self.n, self.k) is not None else ESTIMATE

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "best_ratio": self.best_ratio,
            "exactness_flag": self.exactness,
            "exact_value": exact_dnk(self.n, self.k),
            "degree_used": self.degree_used,
            "witness_roots": [[r.real, r.imag] for r in self.witness_roots],
            "starts": self.starts,
            "starts_requested": self.starts_requested,
            "seed": self.seed,
            "converged_fraction": self.converged_fraction,
            "note": "best_ratio is a lower bound for d(n,k) certified by the witness",
        }

    def csv_row(self) -> list:
        wit = ";".join(f"{r.real!r}{r.imag:+}j" for r in self.witness_roots)
        return [self.n, self.k, repr(self.best_ratio), self.exactness, self.degree_used, wit, self.starts, self.seed]


CSV_HEADER = ["n", "k", "best_ratio", "exactness_flag", "degree_used", "witness_roots", "starts", "seed"]


def structured_starts(m: int) -> list[np.ndarray]:
    """Collided configurations: a copies of 0 and m - a copies of 1."""
    out = []
    for a in range(1, m):
        free = [0.0] * (a - 1) + [1.0] * (m - a - 1)
        x = np.zeros(2 * len(free))
        x[0::2] = free
        out.append(x)
    return out


def estimate_dnk(
    n: int,
    k: int,
    starts: int = 200,
    local_iters: int = 200,
    seed: int = 0,
    config: RootConfig = DEFAULT_CONFIG,
    stop_at_one: bool = True,
) -> ExtremalEstimate:
    """Multi-start Nelder-Mead lower bound for d(n,k).

    Starts cycle over the degrees m = k+2..n; structured collided starts come
    first, then random starts with free roots uniform in the disk of radius 3.
    Since d(n,k) <= 1, the search stops early once a witness reaches 1 when
    ``stop_at_one`` is set.  ``local_iters=0`` evaluates the starts without
    local search.
    """
    if n < 2 or not 0 <= k <= n - 2:
        raise InvalidRange(f"need n >= 2 and 0 <= k <= n-2, got n={n}, k={k}")
    if starts < 1:
        raise InvalidRange("starts must be >= 1")
    degrees = list(range(max(k + 2, 2), n + 1))
    plan: list[tuple[int, np.ndarray | None]] = []
    for m in degrees:
        plan.extend((m, x) for x in structured_starts(m))
    plan = plan[:starts]
    i = 0
    while len(plan) < starts:
        plan.append((degrees[i % len(degrees)], None))
        i += 1

    # degree k+1 contributes ratio 0 (a single zero of P^(k))
    best = 0.0
    best_roots = np.array([0.0, 1.0] + [0.0] * (k - 1), dtype=complex) if k >= 1 else np.array([0.0, 1.0], complex)
    best_m = len(best_roots)
    history = []
    converged = 0
    ran = 0
    for idx, (m, x0) in enumerate(plan):
        ran += 1
        dim = 2 * (m - 2)
        if x0 is None:
            rng = np.random.default_rng([seed, n, k, idx])
            r = 3.0 * np.sqrt(rng.uniform(size=m - 2))
            th = 2 * np.pi * rng.uniform(size=m - 2)
            x0 = np.empty(dim)
            x0[0::2] = r * np.cos(th)
            x0[1::2] = r * np.sin(th)
        if dim == 0 or local_iters == 0:
            x, val = x0, _ratio_of_roots(_chart(x0), k, config)
            converged += 1
        else:
            f0 = _ratio_of_roots(_chart(x0), k, config)
            simplex = np.vstack([x0] + [x0 + 0.25 * e for e in np.eye(dim)])
            res = minimize(
                lambda v: -_ratio_of_roots(_chart(v), k, config),
                x0,
                method="Nelder-Mead",
                options={"maxfev": local_iters, "initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-13},
            )
            converged += bool(res.success)
            x, val = res.x, -float(res.fun)
            if f0 >= val - 1e-12:
                x, val = x0, f0
        roots = _chart(x)
        # gains below rounding noise keep the incumbent (often a clean collided start)
        if val > best + 1e-12 or (val == best and val > 0 and _encode(roots) < _encode(best_roots)):
            best, best_roots, best_m = val, roots, m
        history.append(best)
        if stop_at_one and best >= 1.0 - 1e-12:
            break

    best_roots = _normalize(best_roots)
    # certify: the reported value is recomputed from the witness polynomial
    certified = ratio(from_roots(best_roots), k, config) if degree(from_roots(best_roots)) >= k + 1 else 0.0
    return ExtremalEstimate(
        n=n,
        k=k,
        best_ratio=certified,
        witness_roots=[complex(r) for r in best_roots],
        degree_used=best_m,
        starts=ran,
        seed=seed,
        converged_fraction=converged / ran,
        starts_requested=starts,
        history=history,
    )


def dnk_table(n_max: int, starts: int = 200, local_iters: int = 200, seed: int = 0) -> list[ExtremalEstimate]:
    if n_max < 2:
        raise InvalidRange("n_max must be >= 2")
    return [
        estimate_dnk(n, k, starts=starts, local_iters=local_iters, seed=seed)
        for n in range(2, n_max + 1)
        for k in range(0, n - 1)
    ]


def structured_start_count(n: int, k: int) -> int:
    return sum(m - 1 for m in range(max(k + 2, 2), n + 1))


@lru_cache(maxsize=None)
def _structured_bound(n: int, k: int) -> float:
    return estimate_dnk(n, k, starts=structured_start_count(n, k), local_iters=0, seed=0).best_ratio


def default_dnk(n: int, k: int):
    """d(n,k) for the Form3 slope test.

    Exact when known; otherwise the best ratio over the collided witness
    configurations, which is a certified lower bound.
    """
    from .operators import DnkValue

    ex = exact_dnk(n, k)
    if ex is not None:
        return DnkValue(ex, "exact")
    return DnkValue(_structured_bound(n, k), "estimated lower bound")
