import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_gauge.billiards import Trajectory, perimeter, shoot, validate_trajectory
from billiard_gauge.body import Location, rounded
from billiard_gauge.geom import GeometryError, Vec

SQ3 = math.sqrt(3.0)


def traj(*pts):
    return Trajectory(tuple(Vec(*p) for p in pts))


def inscribed(n, phase=math.pi / 2):
    return traj(*[(math.cos(phase + 2 * math.pi * k / n), math.sin(phase + 2 * math.pi * k / n)) for k in range(n)])


class TestTrajectory:
    def test_rejects_repeated_vertex(self):
        with pytest.raises(GeometryError):
            traj((0, 0), (0, 0), (1, 0))
        with pytest.raises(GeometryError):
            traj((0, 0), (1, 0), (0, 0))  # cyclic repeat

    def test_rejects_single_vertex(self):
        with pytest.raises(GeometryError):
            traj((0, 0))

    def test_perimeter(self):
        assert perimeter(traj((-0.7, 0), (0.7, 0))) == pytest.approx(2.8)
        assert perimeter(inscribed(3)) == pytest.approx(3 * SQ3)


class TestValidate:
    def test_lens_chord(self, lens):
        rep = validate_trajectory(lens, traj((-0.7, 0), (0.7, 0)))
        assert rep.valid and rep.max_residual < 1e-12

    def test_disk_triangle(self, disk):
        assert validate_trajectory(disk, inscribed(3)).valid

    def test_off_boundary(self, disk):
        rep = validate_trajectory(disk, traj((0.5, 0), (-0.5, 0)))
        assert not rep.valid
        assert not any(v.on_boundary for v in rep.vertices)

    def test_non_billiard_triangle(self, disk):
        T = traj((1, 0), (0, 1), (-1, 0))
        assert not validate_trajectory(disk, T).valid

    def test_corner_vertex_in_normal_cone(self, reuleaux):
        # the corner (0.5, √3/2) with the midpoint of the opposite arc: a width chord
        T = traj((0.5, SQ3 / 2), (0.5, SQ3 / 2 - 1.0))
        rep = validate_trajectory(reuleaux, T)
        assert rep.valid
        assert len(rep.vertices[0].normal_cone) == 2

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.floats(0, 2 * math.pi))
    def test_regular_polygons_in_disk(self, disk, n, phase):
        assert validate_trajectory(disk, inscribed(n, phase)).valid

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0, 2 * math.pi), st.floats(0.2, 3.0))
    def test_perturbed_triangle_invalid(self, disk, phase, bump):
        a = [phase, phase + 2 * math.pi / 3 + 0.1 * bump, phase + 4 * math.pi / 3]
        T = traj(*[(math.cos(t), math.sin(t)) for t in a])
        assert not validate_trajectory(disk, T).valid


class TestShoot:
    def test_diameter(self, disk):
        res = shoot(disk, (0, 0), (1, 0), 4)
        pts = [b[0] for b in res.bounces]
        assert pts[0].dist(Vec(1, 0)) < 1e-12 and pts[1].dist(Vec(-1, 0)) < 1e-12
        assert pts[2].dist(Vec(1, 0)) < 1e-12
        assert res.closed and res.period == 2

    def test_triangle_closes(self, disk):
        T = inscribed(3)
        a, b = T.vertices[0], T.vertices[1]
        mid = (a + b) * 0.5
        res = shoot(disk, mid, b - a, 7)
        assert res.closed and res.period == 3
        for p, _ in res.bounces:
            assert min(p.dist(v) for v in T.vertices) < 1e-9

    def test_rounded_reuleaux_stays_on_boundary(self, reuleaux):
        R = rounded(reuleaux, 0.2)
        rng = np.random.default_rng(5)
        start = Vec(0.5, SQ3 / 6) + Vec(*rng.uniform(-0.05, 0.05, 2))
        res = shoot(R, start, Vec.polar(rng.uniform(0, 2 * math.pi)), 100)
        assert len(res.bounces) == 100
        for p, d in res.bounces:
            assert R.contains(p) is Location.BOUNDARY
            assert d.norm() == pytest.approx(1.0)

    def test_start_outside(self, disk):
        with pytest.raises(GeometryError):
            shoot(disk, (2, 0), (1, 0), 3)

    def test_corner_impact_rejected(self, reuleaux):
        c = Vec(0.5, SQ3 / 6)
        with pytest.raises(GeometryError, match="non-smooth impact"):
            shoot(reuleaux, c, Vec(0.5, SQ3 / 2) - c, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 2 * math.pi), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
    def test_bounces_satisfy_mirror_law(self, disk, ang, x, y):
        res = shoot(disk, (x, y), Vec.polar(ang), 6)
        prev_in = Vec.polar(ang)
        for p, out in res.bounces:
            n = p.normalized()
            assert p.norm() == pytest.approx(1.0, abs=1e-12)
            assert out.dot(n) == pytest.approx(-prev_in.dot(n), abs=1e-9)
            prev_in = out
