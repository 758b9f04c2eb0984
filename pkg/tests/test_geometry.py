import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from gausslucas.geometry import (
    convex_hull,
    diameter,
    gauss_lucas_check,
    hull_contains,
    signed_margin,
    zero_set_diameter,
)
from gausslucas.operators import pm_polynomial
from gausslucas.poly import AffineMap, Polynomial, from_roots
from gausslucas.roots import ZeroSet, find_roots


def seg_dist(p, a, b):
    """Brute-force point/segment distance by dense sampling plus endpoints."""
    ts = np.linspace(0, 1, 200001)
    return float(np.min(np.abs(p - (a + ts * (b - a)))))


def in_hull_lp(points, q):
    """q is a convex combination of points (LP feasibility oracle)."""
    pts = np.asarray(points)
    A = np.vstack([pts.real, pts.imag, np.ones(len(pts))])
    res = linprog(np.zeros(len(pts)), A_eq=A, b_eq=[q.real, q.imag, 1.0], bounds=(0, None))
    return res.status == 0


class TestDiameter:
    def test_empty(self):
        assert diameter([]) == 0.0

    def test_single_point_with_multiplicity(self):
        zs = ZeroSet(points=((2 + 1j, 7),), cluster_radius=1e-6, residual_bound=0.0)
        assert diameter(zs) == 0.0

    def test_pm_t2_m4(self):
        zs = find_roots(pm_polynomial(2, 4))
        assert diameter(zs) == pytest.approx(4.0, rel=1e-12)

    @pytest.mark.parametrize("t", [1, 2, 3])
    @pytest.mark.parametrize("M", [10, 100, 1000])
    def test_pm_family(self, t, M):
        assert diameter(find_roots(pm_polynomial(t, M))) == pytest.approx(2 * math.sqrt(M), rel=1e-6)

    def test_multiplicity_ignored(self):
        assert zero_set_diameter(from_roots([0, 0, 0, 0, 3j])) == pytest.approx(3.0, rel=1e-10)

    def test_perfect_power_zero(self):
        assert zero_set_diameter(from_roots([1 - 1j] * 7)) == 0.0


class TestConvexHull:
    def test_interior_point_dropped(self):
        h = convex_hull([0, 1, 1j, 0.25 + 0.25j])
        assert h.vertices == (0j, 1 + 0j, 1j)

    def test_collinear(self):
        h = convex_hull([0, 1, 2])
        assert h.kind == "segment" and h.vertices == (0j, 2 + 0j)

    def test_single_point(self):
        h = convex_hull([3 - 1j, 3 - 1j])
        assert h.kind == "point" and h.vertices == (3 - 1j,)

    def test_collinear_on_edge_removed(self):
        h = convex_hull([1j, -1, -0.5 + 0.5j, 1])
        assert len(h.vertices) == 3

    def test_start_and_orientation(self, rng):
        pts = rng.normal(size=30) + 1j * rng.normal(size=30)
        v = convex_hull(pts).vertices
        low = min(pts, key=lambda z: (z.imag, z.real))
        assert v[0] == low
        area = sum((v[i].conjugate() * v[(i + 1) % len(v)]).imag for i in range(len(v))) / 2
        assert area > 0

    def test_matches_qhull(self, rng):
        for _ in range(20):
            pts = rng.normal(size=25) + 1j * rng.normal(size=25)
            ref = ConvexHull(np.column_stack([pts.real, pts.imag]))
            assert set(convex_hull(pts).vertices) == set(pts[ref.vertices])


class TestHullContains:
    def test_centroid_inside(self):
        ok, (m,) = hull_contains(convex_hull([0, 1, 1j]), [(1 + 1j) / 3])
        assert ok and m > 0

    def test_segment_band(self):
        ok, _ = hull_contains(convex_hull([0, 2]), [1 + 1e-12j], tol=1e-9)
        assert ok

    def test_outside_margin_is_distance(self):
        h = convex_hull([0, 1, 1j])
        ok, (m,) = hull_contains(h, [2])
        oracle = min(seg_dist(2, a, b) for a, b in [(0, 1), (1, 1j), (1j, 0)])
        assert not ok
        assert m == pytest.approx(-oracle, abs=1e-5)
        assert m == pytest.approx(-1.0, abs=1e-15)

    def test_negative_tol(self):
        with pytest.raises(ValueError):
            hull_contains(convex_hull([0]), [0], tol=-1)

    def test_margin_signs_agree_with_lp(self, rng):
        pts = rng.normal(size=12) + 1j * rng.normal(size=12)
        h = convex_hull(pts)
        for q in rng.normal(size=200) * 1.5 + 1j * rng.normal(size=200) * 1.5:
            m = signed_margin(h, q)
            if abs(m) > 1e-9:
                assert (m > 0) == in_hull_lp(pts, q)


class TestGaussLucasCheck:
    def test_fifth_power(self):
        rep = gauss_lucas_check(Polynomial([0, 0, 0, 0, 0, 1]))
        assert rep.passed and rep.margins == [0.0]
        assert rep.hull.kind == "point"

    def test_triangle(self):
        rep = gauss_lucas_check(from_roots([1, -1, 1j]))
        # P' = 3z^2 - 2iz - 1, zeros (i +- sqrt(2))/3
        want = sorted([(math.sqrt(2) + 1j) / 3, (-math.sqrt(2) + 1j) / 3], key=lambda z: z.real)
        got = sorted(rep.critical_points.centers, key=lambda z: z.real)
        np.testing.assert_allclose(got, want, atol=1e-12)
        assert rep.passed and all(m > 0 for m in rep.margins)
        assert all(in_hull_lp([1, -1, 1j], z) for z in got)

    def test_degree_one_rejected(self):
        with pytest.raises(ValueError):
            gauss_lucas_check(Polynomial([1, 1]))

    def test_json_keys(self):
        js = gauss_lucas_check(from_roots([0, 1, 2j])).to_json()
        assert js["pass"] is True and js["tol"] == 1e-7


pt = st.builds(complex, st.floats(-5, 5), st.floats(-5, 5))


@settings(max_examples=200, deadline=None)
@given(pts=st.lists(pt, min_size=0, max_size=15), a=pt, b=pt)
def test_diameter_affine_covariance(pts, a, b):
    assume(abs(a) > 1e-3)
    m = AffineMap(a, b)
    d = diameter(pts)
    assert diameter([m(z) for z in pts]) == pytest.approx(abs(a) * d, rel=1e-9, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(pts=st.lists(pt, min_size=1, max_size=20))
def test_diameter_equals_hull_diameter(pts):
    assert diameter(convex_hull(pts).vertices) == pytest.approx(diameter(pts), rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(pts=st.lists(pt, min_size=1, max_size=20))
def test_hull_contains_its_points(pts):
    ok, _ = hull_contains(convex_hull(pts), pts, 0.0)
    assert ok


@settings(max_examples=100, deadline=None)
@given(roots=st.lists(pt, min_size=2, max_size=10))
def test_derivative_diameter_shrinks(roots):
    p = from_roots(roots)
    assume(p.degree >= 2)
    dp = find_roots(p).centers
    dq = find_roots(p.__class__(np.arange(1, len(p.coeffs)) * p.coeffs[1:])).centers
    assert diameter(dq) <= diameter(dp) + 1e-7
