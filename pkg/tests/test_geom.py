import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_gauge.geom import (Disk, GeometryError, Tolerance, Vec, angle_diff, circle_circle_intersection,
                                 inner_bisector, min_enclosing_disk, reflect)

SQ3 = math.sqrt(3.0)


def brute_minidisk_radius(pts):
    """Smallest covering circle among all pair-diameter and triple circumcircles."""
    pts = [np.asarray(p, float) for p in pts]
    if len(pts) == 1:
        return 0.0
    best = math.inf

    def cover(c, r):
        return all(np.linalg.norm(p - c) <= r * (1 + 1e-9) + 1e-12 for p in pts)

    for a, b in itertools.combinations(pts, 2):
        c, r = (a + b) / 2, np.linalg.norm(a - b) / 2
        if r < best and cover(c, r):
            best = r
    for a, b, c in itertools.combinations(pts, 3):
        M = np.array([b - a, c - a])
        det = np.linalg.det(M)
        if abs(det) < 1e-12:
            continue
        rhs = 0.5 * np.array([np.dot(b - a, b - a), np.dot(c - a, c - a)])
        o = a + np.linalg.solve(M, rhs)
        r = np.linalg.norm(o - a)
        if r < best and cover(o, r):
            best = r
    return best


class TestMinEnclosingDisk:
    def test_single_point(self):
        d, s = min_enclosing_disk([(0, 0)])
        assert d.center == Vec(0, 0) and d.radius == 0 and s == [0]

    def test_pair(self):
        d, s = min_enclosing_disk([(0, 0), (2, 0)])
        assert d.center.dist(Vec(1, 0)) < 1e-15 and d.radius == pytest.approx(1.0) and sorted(s) == [0, 1]

    def test_equilateral(self):
        d, _ = min_enclosing_disk([(0, 0), (1, 0), (0.5, SQ3 / 2)])
        assert d.center.dist(Vec(0.5, SQ3 / 6)) < 1e-12
        assert d.radius == pytest.approx(1 / SQ3, abs=1e-12)

    def test_empty(self):
        with pytest.raises(GeometryError, match="empty point set"):
            min_enclosing_disk([])

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=9))
    def test_matches_brute_force(self, pts):
        d, support = min_enclosing_disk(pts)
        assert d.radius == pytest.approx(brute_minidisk_radius(pts), rel=1e-9, abs=1e-9)
        assert len(support) <= 3
        for p in pts:
            assert Vec(*p).dist(d.center) <= d.radius * (1 + 1e-9) + 1e-12
        for i in support:
            assert Vec(*pts[i]).dist(d.center) == pytest.approx(d.radius, rel=1e-9, abs=1e-9)


class TestCircleIntersection:
    def test_two_points(self):
        pts = circle_circle_intersection(Disk(Vec(0, 0), 1), Disk(Vec(1, 0), 1))
        assert len(pts) == 2
        got = sorted((round(p.x, 12), round(p.y, 12)) for p in pts)
        assert got == [(0.5, round(-SQ3 / 2, 12)), (0.5, round(SQ3 / 2, 12))]

    def test_tangent(self):
        pts = circle_circle_intersection(Disk(Vec(0, 0), 1), Disk(Vec(2, 0), 1))
        assert len(pts) == 1 and pts[0].dist(Vec(1, 0)) < 1e-12

    def test_disjoint(self):
        assert circle_circle_intersection(Disk(Vec(0, 0), 1), Disk(Vec(3, 0), 1)) == []

    def test_coincident(self):
        with pytest.raises(GeometryError, match="coincident circles"):
            circle_circle_intersection(Disk(Vec(0, 0), 1), Disk(Vec(0, 0), 1))

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 2), st.floats(0.2, 2))
    def test_points_on_both_circles(self, x, y, ra, rb):
        a, b = Disk(Vec(0, 0), ra), Disk(Vec(x, y), rb)
        if Vec(x, y).norm() < 1e-6:
            return
        for p in circle_circle_intersection(a, b):
            assert p.dist(a.center) == pytest.approx(ra, abs=1e-6)
            assert p.dist(b.center) == pytest.approx(rb, abs=1e-6)


class TestBisectorReflect:
    def test_right_angle(self):
        v = inner_bisector((1, 0), (0, 0), (0, 1))
        assert v.dist(Vec(math.sqrt(0.5), math.sqrt(0.5))) < 1e-15

    def test_doubled_segment(self):
        assert inner_bisector((1, 0), (0, 0), (1, 0)).dist(Vec(1, 0)) < 1e-15

    def test_straight_through(self):
        with pytest.raises(GeometryError, match="straight-through"):
            inner_bisector((1, 0), (0, 0), (-1, 0))

    @pytest.mark.parametrize("d,n,want", [
        ((math.sqrt(0.5), -math.sqrt(0.5)), (0, -1), (math.sqrt(0.5), math.sqrt(0.5))),
        ((0, -1), (0, -1), (0, 1)),
        ((1, 0), (0, -1), (1, 0)),
    ])
    def test_reflect(self, d, n, want):
        assert reflect(Vec(*d), Vec(*n)).dist(Vec(*want)) < 1e-15

    @given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_reflect_involution_and_norm(self, a, b):
        d, n = Vec.polar(a), Vec.polar(b)
        r = reflect(d, n)
        assert r.norm() == pytest.approx(1.0)
        assert reflect(r, n).dist(d) < 1e-12


def test_angle_diff_range():
    assert angle_diff(0.1, 2 * math.pi) == pytest.approx(0.1)
    assert -math.pi <= angle_diff(3.0, -3.0) <= math.pi


def test_tolerance_positive():
    with pytest.raises(GeometryError):
        Tolerance(0.0, 1e-7)
