import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_gauge.body import (Location, RoundedBody, build_disk_polygon, contains, hausdorff_sampled, inradius,
                                 is_fat, rounded, support, width)
from billiard_gauge.geom import GeometryError, Vec

SQ3 = math.sqrt(3.0)


def dense_width(B, n=100_000):
    th = np.pi * np.arange(n) / n
    return float(np.min(B.chain.support_values(th) + B.chain.support_values(th + np.pi)))


class TestBuild:
    def test_single_disk(self, disk):
        assert len(disk.chain.arcs) == 1 and disk.chain.corners == ()
        assert disk.chain.arcs[0].span == pytest.approx(2 * math.pi)

    def test_reuleaux(self, reuleaux):
        assert len(reuleaux.chain.arcs) == 3
        corners = sorted((round(c.x, 12), round(c.y, 12)) for c in reuleaux.chain.corners)
        assert corners == sorted([(0.0, 0.0), (1.0, 0.0), (0.5, round(SQ3 / 2, 12))])
        for a in reuleaux.chain.arcs:
            assert a.span == pytest.approx(math.pi / 3)

    def test_redundant_center_pruned(self):
        # (0.05, 0) lies between the other two, so its disk contains their intersection
        D = build_disk_polygon([(0, 0), (0.1, 0), (0.05, 0)], 1.0)
        assert D.pruned == (2,)
        assert len(D.centers) == 2

    def test_duplicate_pruned(self):
        D = build_disk_polygon([(0, 0), (1, 0), (0, 0)], 1.0)
        assert 2 in D.pruned

    def test_degenerate(self):
        with pytest.raises(GeometryError, match="empty or degenerate interior"):
            build_disk_polygon([(0, 0), (2, 0)], 1.0)

    def test_arcs_form_closed_chain(self, reuleaux, lens, thin):
        for B in (reuleaux, lens, thin):
            assert B.chain.total_turning() == pytest.approx(2 * math.pi)
            pts = B.chain.sample(400)
            for p in pts:
                assert B.contains(Vec(*p)) is Location.BOUNDARY

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.floats(-0.45, 0.45), st.floats(-0.45, 0.45)), min_size=1, max_size=7))
    def test_boundary_points_on_some_circle_inside_all(self, cs):
        D = build_disk_polygon(cs, 1.0)
        for x, y in D.chain.sample(64):
            d = [math.hypot(x - cx, y - cy) for cx, cy in cs]
            assert max(d) == pytest.approx(1.0, abs=1e-9)


class TestPredicates:
    def test_fat(self, reuleaux, disk):
        assert is_fat(reuleaux) and is_fat(disk)
        assert not is_fat(build_disk_polygon([(0, 0), (1.2, 0)], 1.0))

    @pytest.mark.parametrize("q,loc", [((0.5, SQ3 / 6), Location.INSIDE), ((0.5, SQ3 / 2), Location.BOUNDARY),
                                       ((2, 0), Location.OUTSIDE)])
    def test_contains(self, reuleaux, q, loc):
        assert contains(reuleaux, q) is loc

    def test_support(self, disk, lens):
        p, v = support(disk, (0, 1))
        assert p.dist(Vec(0, 1)) < 1e-12 and v == pytest.approx(1)
        p, v = support(lens, (1, 0))
        assert p.dist(Vec(0.7, 0)) < 1e-12 and v == pytest.approx(0.7)
        p, v = support(lens, (0, 1))
        assert p.dist(Vec(0, math.sqrt(0.91))) < 1e-9 and v == pytest.approx(math.sqrt(0.91), abs=1e-12)

    def test_support_matches_sampling(self, thin):
        pts = thin.chain.sample(20_000)
        for t in np.linspace(0, 2 * np.pi, 17):
            u = np.array([math.cos(t), math.sin(t)])
            _, v = support(thin, Vec(*u))
            assert v == pytest.approx(float(np.max(pts @ u)), abs=1e-6)


class TestWidth:
    def test_disk(self, disk):
        assert width(disk)[0] == pytest.approx(2.0, abs=1e-12)

    def test_reuleaux_constant_width(self, reuleaux):
        assert width(reuleaux)[0] == pytest.approx(1.0, abs=1e-12)
        th = np.linspace(0, np.pi, 50)
        w = reuleaux.chain.support_values(th) + reuleaux.chain.support_values(th + np.pi)
        assert np.allclose(w, 1.0, atol=1e-12)

    def test_lens(self, lens):
        w, u, (p, q) = width(lens)
        assert w == pytest.approx(1.4, abs=1e-12)
        assert abs(u.x) == pytest.approx(1.0, abs=1e-9)
        assert {round(p.x, 9), round(q.x, 9)} == {0.7, -0.7}

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)), min_size=2, max_size=6))
    def test_against_dense_scan(self, cs):
        try:
            D = build_disk_polygon(cs, 1.0)
        except GeometryError:
            return
        w = width(D)[0]
        assert w <= dense_width(D) + 1e-12
        assert w >= dense_width(D) - 1e-7


class TestInradiusRounding:
    def test_inradius(self, disk, reuleaux, lens):
        assert inradius(disk)[0] == pytest.approx(1.0)
        v, c = inradius(reuleaux)
        assert v == pytest.approx(1 - 1 / SQ3, abs=1e-12) and c.dist(Vec(0.5, SQ3 / 6)) < 1e-12
        v, c = inradius(lens)
        assert v == pytest.approx(0.7) and c.norm() < 1e-12

    def test_rounded_reuleaux(self, reuleaux):
        R = rounded(reuleaux, 0.2)
        radii = sorted(round(a.radius, 12) for a in R.chain.arcs)
        assert radii == [0.2, 0.2, 0.2, 1.0, 1.0, 1.0]
        for x, y in R.chain.sample(10_000):
            assert reuleaux.contains(Vec(x, y)) is not Location.OUTSIDE
        assert R.chain.corners == ()

    def test_rounded_at_inradius_is_disk(self, reuleaux):
        rin, c = inradius(reuleaux)
        R = rounded(reuleaux, rin)
        assert len(R.chain.arcs) == 1
        assert R.chain.arcs[0].radius == pytest.approx(rin) and R.chain.arcs[0].center.dist(c) < 1e-12

    def test_rounded_single_disk_is_itself(self, disk):
        R = rounded(disk, 0.3)
        assert hausdorff_sampled(R, disk) < 1e-12

    def test_rounding_errors(self, reuleaux):
        with pytest.raises(GeometryError, match="exceeds inradius"):
            rounded(reuleaux, 0.5)
        with pytest.raises(GeometryError):
            rounded(reuleaux, 0.0)

    def test_hausdorff_decreases(self, reuleaux):
        rin = inradius(reuleaux)[0]
        h = [hausdorff_sampled(reuleaux, rounded(reuleaux, f * rin)) for f in (0.1, 0.01, 0.001)]
        assert h[0] > h[1] > h[2] > 0

    def test_rounded_contains(self, reuleaux):
        R = rounded(reuleaux, 0.2)
        assert isinstance(R, RoundedBody)
        assert R.contains((0.5, SQ3 / 6)) is Location.INSIDE
        assert R.contains((0.5, SQ3 / 2)) is Location.OUTSIDE  # the corner is cut off
