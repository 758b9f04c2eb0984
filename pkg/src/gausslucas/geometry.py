"""Diameter, convex hull and hull containment for planar point sets.

Points are complex numbers.  Hulls may degenerate to a segment or a point;
both are handled as ordinary hulls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .poly import Polynomial, degree, derivative
from .roots import (
    DEFAULT_CONFIG,
    NonConvergence,
    RootConfig,
    ZeroSet,
    cluster_zeros,
    find_roots,
    is_perfect_power,
    raw_roots,
)


@dataclass(frozen=True)
class HullPolygon:
    """Extreme points in counterclockwise order, starting lowest-then-leftmost."""

    vertices: tuple[complex, ...]

    @property
    def kind(self) -> str:
        return {0: "empty", 1: "point", 2: "segment"}.get(len(self.vertices), "polygon")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [[v.real, v.imag] for v in self.vertices],
        }


def _points(zs) -> np.ndarray:
    if isinstance(zs, ZeroSet):
        return zs.centers
    return np.asarray(list(zs), dtype=np.complex128)


def diameter(zs: ZeroSet | Iterable[complex]) -> float:
    """Largest pairwise distance; 0 for empty and one-point sets.

    For a ZeroSet, multiplicities are ignored.
    """
    pts = _points(zs)
    if len(pts) < 2:
        return 0.0
    return float(np.max(np.abs(pts[:, None] - pts[None, :])))


def zero_set_diameter(p: Polynomial, rel_radius: float = 0.05, config: RootConfig = DEFAULT_CONFIG) -> float:
    """diam Z(p) robust to repeated zeros.

    Raw zeros are clustered at ``rel_radius`` times their spread and each
    cluster is kept only if verified as a genuine multiple zero, so split
    copies of one repeated zero do not inflate the diameter.  Exact powers
    ``lead*(z-c)**m`` give 0 directly.
    """
    d = degree(p)
    if d < 1 or is_perfect_power(p)[0]:
        return 0.0
    z, resid = raw_roots(np.array(p.coeffs[: d + 1]), config)
    if not np.all(np.isfinite(z)) or not resid <= config.residual_tol:
        raise NonConvergence("root refinement failed inside diameter computation", resid)
    spread = diameter(z)
    if spread == 0.0:
        return 0.0
    return diameter(cluster_zeros(p, z, rel_radius * spread, resid))


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def _orient(o: complex, a: complex, b: complex) -> int:
    """Exact sign of the cross product (a - o) x (b - o).

    A floating-point filter decides clear cases; near-zero or underflowed
    products are settled in rational arithmetic, which is exact for doubles.
    """
    left = (a.real - o.real) * (b.imag - o.imag)
    right = (a.imag - o.imag) * (b.real - o.real)
    det = left - right
    bound = 1e-15 * (abs(left) + abs(right))
    if bound > 0 and abs(det) > bound:
        return 1 if det > 0 else -1
    F = Fraction
    exact = (F(a.real) - F(o.real)) * (F(b.imag) - F(o.imag)) - (F(a.imag) - F(o.imag)) * (F(b.real) - F(o.real))
    return (exact > 0) - (exact < 0)


def convex_hull(points: Sequence[complex]) -> HullPolygon:
    """Andrew's monotone chain with exact orientation; collinear boundary points are dropped."""
    pts = sorted({(complex(p).imag, complex(p).real) for p in points})
    pts = [complex(x, y) for y, x in pts]
    if len(pts) <= 2:
        return HullPolygon(tuple(pts))
    # sorted by (y, x): the chain walks bottom-to-top
    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    # with (y, x) ordering the "lower" chain runs along the right side
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return HullPolygon(tuple(hull))


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    if _orient(a, b, p) == 0 and (
        min(a.real, b.real) <= p.real <= max(a.real, b.real)
        and min(a.imag, b.imag) <= p.imag <= max(a.imag, b.imag)
    ):
        return 0.0  # exactly on the segment
    ab = b - a
    # squared length from components: abs(ab) ** 2 rounds and moves endpoints
    L2 = ab.real * ab.real + ab.imag * ab.imag
    if L2 == 0:
        return min(abs(p - a), abs(p - b))
    t = ((p - a) * ab.conjugate()).real / L2
    if t <= 0.0:
        return abs(p - a)
    if t >= 1.0:
        return abs(p - b)
    return abs(_cross(a, b, p)) / math.sqrt(L2)


def signed_margin(h: HullPolygon, p: complex) -> float:
    """Distance to the boundary, positive inside, negative outside.

    Degenerate hulls have no interior, so the margin is minus the distance
    to the point or segment (0 on it).
    """
    v = h.vertices
    p = complex(p)
    if not v:
        return -np.inf
    if len(v) == 1:
        return 0.0 - abs(p - v[0])
    if len(v) == 2:
        return 0.0 - _segment_distance(p, v[0], v[1])
    inside = True
    edge_dist = np.inf
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        cr = _cross(a, b, p)
        L = abs(b - a)
        sign = _orient(a, b, p)
        if sign < 0:
            inside = False
        elif cr < 0:
            cr = 0.0  # rounding noise on a point that is exactly on this edge's inner side
        edge_dist = min(edge_dist, cr / L)
    if inside:
        return float(edge_dist)
    return -min(_segment_distance(p, v[i], v[(i + 1) % len(v)]) for i in range(len(v)))


def hull_contains(h: HullPolygon, pts: Iterable[complex], tol: float = 1e-7) -> tuple[bool, list[float]]:
    """Whether every point lies inside ``h`` or within ``tol`` of it.

    Returns the verdict and the per-point signed margins.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    margins = [float(signed_margin(h, p)) for p in pts]
    return all(m >= -tol for m in margins), margins


@dataclass
class GaussLucasReport:
    passed: bool
    margins: list[float]
    roots: ZeroSet
    critical_points: ZeroSet
    hull: HullPolygon
    tol: float

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "tol": self.tol,
            "margins": self.margins,
            "min_margin": min(self.margins) if self.margins else None,
            "roots": self.roots.to_json(),
            "critical_points": self.critical_points.to_json(),
            "hull": self.hull.to_json(),
        }


def gauss_lucas_check(p: Polynomial, tol: float = 1e-7, config: RootConfig = DEFAULT_CONFIG) -> GaussLucasReport:
    """Check that the zeros of p' lie in the convex hull of the zeros of p.

    Requires ``degree(p) >= 2``; root-solver errors propagate.
    """
    if degree(p) < 2:
        raise ValueError("Gauss-Lucas check needs degree >= 2")
    z = find_roots(p, config)
    zc = find_roots(derivative(p, 1), config)
    h = convex_hull(z.centers)
    ok, margins = hull_contains(h, zc.centers, tol)
    return GaussLucasReport(ok, margins, z, zc, h, tol)
