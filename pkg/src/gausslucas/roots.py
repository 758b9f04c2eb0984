"""Zero sets of polynomials: Aberth-Ehrlich simultaneous iteration + clustering."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .poly import Polynomial, degree

EPS = np.finfo(float).eps


class RootError(Exception):
    """Base class for root-solver failures."""


class ConstantPolynomial(RootError):
    pass


class NonConvergence(RootError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class RootConfig:
    max_iter: int = 200
    residual_tol: float = 1e-12
    cluster_radius: float = 1e-6
    seed: int = 0
    verify_multiplicity: bool = True


DEFAULT_CONFIG = RootConfig()
# Callers expecting repeated roots should cluster coarsely.
MULTIPLE_ROOT_CONFIG = RootConfig(cluster_radius=1e-3)


@dataclass(frozen=True)
class ZeroSet:
    """Multiset of zeros as (center, multiplicity) clusters."""

    points: tuple[tuple[complex, int], ...] = ()
    cluster_radius: float = 0.0
    residual_bound: float = 0.0
    raw: tuple[complex, ...] = field(default=(), compare=False, repr=False)

    @property
    def centers(self) -> np.ndarray:
        return np.array([c for c, _ in self.points], dtype=np.complex128)

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.points]

    def expanded(self) -> np.ndarray:
        """Centers repeated by multiplicity."""
        return np.array([c for c, m in self.points for _ in range(m)], dtype=np.complex128)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def to_json(self) -> dict:
        return {
            "points": [
                {"re": float(c.real), "im": float(c.imag), "multiplicity": m}
                for c, m in self.points
            ],
            "cluster_radius": self.cluster_radius,
            "residual_bound": self.residual_bound,
        }


def _horner_with_derivative(c: np.ndarray, z: np.ndarray):
    """p(z), p'(z) and the rounding-error floor sum |c_j| |z|^j."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    az = np.abs(z)
    floor = np.full(z.shape, abs(c[-1]))
    for cj in c[-2::-1]:
        dp = dp * z + p
        p = p * z + cj
        floor = floor * az + abs(cj)
    return p, dp, floor


def _small_degree(c: np.ndarray) -> np.ndarray:
    if len(c) == 2:
        return np.array([-c[0] / c[1]])
    # stable quadratic formula
    a, b, cc = c[2], c[1], c[0]
    disc = np.sqrt(b * b - 4 * a * cc)
    q = -0.5 * (b + disc) if (b.conjugate() * disc).real >= 0 else -0.5 * (b - disc)
    if q == 0:
        return np.array([0j, 0j])
    return np.array([q / a, cc / q])


def _aberth(c: np.ndarray, cfg: RootConfig) -> tuple[np.ndarray, float]:
    n = len(c) - 1
    rng = np.random.default_rng(cfg.seed)
    ratios = np.abs(c[:-1] / c[-1])
    # Cauchy bound, tightened by Fujiwara's 2 max |c_{n-j}/c_n|^(1/j): both
    # bound every root modulus, and the latter stays near R for z^n - R^n.
    fujiwara = 2.0 * np.max(ratios[::-1] ** (1.0 / np.arange(1, n + 1)))
    radius = min(1.0 + np.max(ratios), fujiwara)
    angles = 2 * np.pi * (np.arange(n) + rng.uniform(0.0, 0.5, n)) / n + rng.uniform(0, 2 * np.pi)
    # Pull the circle onto the root moduli when the Cauchy bound is loose.
    geo = abs(c[0] / c[-1]) ** (1.0 / n) if c[0] != 0 else 0.0
    if 0 < geo < radius:
        radius = 0.5 * (radius + geo)
    z = radius * np.exp(1j * angles)
    active = np.ones(n, dtype=bool)
    eye = np.eye(n, dtype=bool)
    for _ in range(cfg.max_iter):
        with np.errstate(over="ignore", invalid="ignore"):
            p, dp, floor = _horner_with_derivative(c, z)
        at_noise = np.abs(p) <= 4 * n * EPS * floor
        active &= ~at_noise
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        diff = z[idx, None] - z[None, :]
        diff[eye[idx]] = 1.0
        inv = 1.0 / diff
        inv[eye[idx]] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p[idx] / dp[idx]
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = ratio[bad] if np.all(np.isfinite(ratio[bad])) else 0.0
        z[idx] -= w
        small = np.abs(w) <= 2 * EPS * np.maximum(1.0, np.abs(z[idx]))
        active[idx[small]] = False
    with np.errstate(over="ignore", invalid="ignore"):
        p, _, _ = _horner_with_derivative(c, z)
        scale = np.max(np.abs(c))
        resid = np.abs(p) / (scale * np.maximum(1.0, np.abs(z)) ** n)
    return z, float(resid.max())


def _groups(z: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage index groups at ``radius``."""
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if radius > 0 and n > 1:
        d = np.abs(z[:, None] - z[None, :])
        ii, jj = np.nonzero(np.triu(d <= radius, 1))
        for i, j in zip(ii, jj):
            parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _sort_points(pts):
    pts.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    return pts


def _cluster(z: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    """Plain geometric clusters; deterministic order by (re, im) of centers."""
    return _sort_points([(complex(np.mean(z[g])), len(g)) for g in _groups(z, radius)])


def raw_roots(c: np.ndarray, config: RootConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, float]:
    """Unclustered zeros of the coefficient array ``c`` (ascending, c[-1] != 0).

    Returns the roots and the largest scaled residual.
    """
    nz = 0
    while c[nz] == 0:
        nz += 1
    c = c[nz:]
    if len(c) == 1:
        z, resid = np.zeros(0, complex), 0.0
    elif len(c) <= 3:
        z = _small_degree(c)
        pv, _, _ = _horner_with_derivative(c, z)
        scaled = np.max(np.abs(c)) * np.maximum(1.0, np.abs(z)) ** (len(c) - 1)
        resid = float(np.max(np.abs(pv) / scaled))
    else:
        z, resid = _aberth(c, config)
    if nz:
        z = np.concatenate([np.zeros(nz, complex), z])
    return z, resid


def _polish(c: np.ndarray, center: complex, mult: int, radius: float) -> complex:
    """Newton on p^(mult-1), where a mult-fold zero of p is simple."""
    q = c
    for _ in range(mult - 1):
        q = q[1:] * np.arange(1, len(q))
    if len(q) < 2:
        return center
    x = np.array([center])
    v, dv, _ = _horner_with_derivative(q, x)
    best, best_res = center, abs(v[0])
    for _ in range(8):
        if dv[0] == 0:
            break
        x = x - v / dv
        v, dv, _ = _horner_with_derivative(q, x)
        if not np.isfinite(x[0]) or abs(x[0] - center) > radius:
            break
        if abs(v[0]) < best_res:
            best, best_res = complex(x[0]), abs(v[0])
        else:
            break
    return best


def _is_multiple(c: np.ndarray, x: complex, mult: int, rtol: float) -> bool:
    """p, p', ..., p^(mult-1) all vanish at x to within rtol of their rounding floor."""
    q = c
    xa = np.array([x])
    for _ in range(mult):
        v, _, floor = _horner_with_derivative(q, xa)
        if abs(v[0]) > rtol * max(floor[0], 1e-300):
            return False
        q = q[1:] * np.arange(1, len(q))
    return True


def cluster_zeros(
    p: Polynomial,
    z: np.ndarray,
    radius: float,
    residual: float = 0.0,
    verify: bool = True,
    multiplicity_rtol: float = 1e-9,
) -> ZeroSet:
    """Merge roots within ``radius`` into (center, multiplicity) points.

    Multi-root clusters are polished by Newton on p^(mult-1).  With
    ``verify``, a cluster is kept only when p and its first mult-1
    derivatives vanish at the polished center; otherwise it is re-split at a
    tenth of the radius (down to 1e-6 times the radius).
    """
    c = np.array(p.coeffs[: degree(p) + 1])
    floor_radius = radius * 1e-6

    def split(idx: np.ndarray, r: float) -> list[tuple[complex, int]]:
        out = []
        for g in _groups(z[idx], r):
            sub = idx[g]
            if len(sub) == 1:
                out.append((complex(z[sub[0]]), 1))
                continue
            mean = complex(np.mean(z[sub]))
            center = _polish(c, mean, len(sub), r)
            if not verify or _is_multiple(c, center, len(sub), multiplicity_rtol):
                out.append((center, len(sub)))
            elif r / 10 > floor_radius:
                out.extend(split(sub, r / 10))
            else:
                out.append((mean, len(sub)))
        return out

    pts = _sort_points(split(np.arange(len(z)), radius)) if len(z) else []
    return ZeroSet(
        points=tuple(pts),
        cluster_radius=radius,
        residual_bound=residual,
        raw=tuple(complex(v) for v in z),
    )


def find_roots(p: Polynomial, config: RootConfig = DEFAULT_CONFIG) -> ZeroSet:
    """All zeros of ``p`` with multiplicity, clustered at ``config.cluster_radius``.

    Raises ConstantPolynomial for degree < 1 and NonConvergence when the
    scaled residual ``|p(r)| / (scale * max(1,|r|)^deg)`` exceeds
    ``config.residual_tol`` after ``config.max_iter`` sweeps.
    """
    d = degree(p)
    if d < 1:
        raise ConstantPolynomial(f"polynomial of degree {d} has no zeros to find")
    z, resid = raw_roots(np.array(p.coeffs[: d + 1]), config)
    if not np.all(np.isfinite(z)) or not resid <= config.residual_tol:
        raise NonConvergence(
            f"root refinement did not reach residual {config.residual_tol:g} "
            f"within {config.max_iter} iterations",
            best_residual=resid if np.isfinite(resid) else float("inf"),
        )
    return cluster_zeros(p, z, config.cluster_radius, resid, verify=config.verify_multiplicity)


def is_perfect_power(p: Polynomial, rtol: float = 1e-9) -> tuple[bool, complex | None, int]:
    """Test whether ``p`` equals ``lead * (z - c)**m`` up to ``rtol``.

    Returns ``(flag, c, m)``; ``c`` is read off the subleading coefficient.
    """
    m = degree(p)
    if m < 1:
        return False, None, m
    coeffs = p.coeffs[: m + 1]
    lead = complex(coeffs[m])
    c = -complex(coeffs[m - 1]) / (m * lead)
    j = np.arange(m + 1)
    binom = np.array([comb(m, int(i)) for i in j], dtype=float)
    want = lead * binom * (-c) ** (m - j)
    s = max(np.max(np.abs(coeffs)), np.max(np.abs(want)))
    return bool(np.max(np.abs(coeffs - want)) <= rtol * s), c, m


def distinct_zero_count(p: Polynomial, config: RootConfig = MULTIPLE_ROOT_CONFIG) -> int:
    """Number of distinct zeros (0 for constants and the zero polynomial).

    Exact powers ``lead*(z-c)**m`` are recognized structurally before
    clustering, because numerically split high-multiplicity roots spread
    roughly like eps**(1/m).
    """
    if degree(p) < 1:
        return 0
    flag, _, _ = is_perfect_power(p)
    if flag:
        return 1
    return len(find_roots(p, config))
