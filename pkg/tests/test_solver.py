import math

import numpy as np
import pytest

from billiard_gauge.billiards import validate_trajectory
from billiard_gauge.body import build_disk_polygon, rounded, width
from billiard_gauge.geom import GeometryError
from billiard_gauge.io import dumps_lines
from billiard_gauge.solver import (SolverConfig, brute_force_oracle, oracle_grid_bound, search_3_periodic,
                                   shortest_2_periodic, shortest_blocking_polygon, shortest_trajectory)
from billiard_gauge.translative import fits_in_translate

SQ3 = math.sqrt(3.0)


class TestConfig:
    @pytest.mark.parametrize("kw", [{"n_starts": 0}, {"direction_samples": -1}, {"tol_length": 0.0},
                                    {"seed": -1}, {"seed": 2**64}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SolverConfig(**kw)


class TestPeriodTwo:
    @pytest.mark.parametrize("name,length", [("disk", 4.0), ("reuleaux", 2.0), ("lens", 2.8)])
    def test_lengths(self, request, name, length):
        B = request.getfixturevalue(name)
        c = shortest_2_periodic(B)
        assert c.length == pytest.approx(length, abs=1e-9)
        assert c.period == 2
        assert validate_trajectory(B, c.trajectory).valid


class TestPeriodThree:
    def test_disk_equilateral(self, disk):
        cands = search_3_periodic(disk)
        assert cands, "no 3-periodic trajectory found"
        assert min(c.length for c in cands) == pytest.approx(3 * SQ3, abs=1e-6)

    def test_reuleaux_above_two(self, reuleaux):
        cands = search_3_periodic(reuleaux)
        assert cands and all(c.length > 2.0 for c in cands)

    def test_lens_above_width_chord(self, lens):
        assert all(c.length > 2.8 for c in search_3_periodic(lens))

    def test_results_validate_sorted_distinct(self, thin):
        cands = search_3_periodic(thin)
        lengths = [c.length for c in cands]
        assert lengths == sorted(lengths)
        for c in cands:
            assert c.period == 3
            assert validate_trajectory(thin, c.trajectory).valid


class TestShortest:
    def test_disk(self, disk):
        rep = shortest_trajectory(disk)
        assert rep.best_length == pytest.approx(4.0, abs=1e-9) and rep.period == 2

    def test_reuleaux(self, reuleaux):
        rep = shortest_trajectory(reuleaux)
        assert rep.best_length == pytest.approx(2.0, abs=1e-9) and rep.period == 2
        assert rep.blocking_ok and rep.method_delta is None

    def test_thin_body_period_three(self, thin):
        rep = shortest_trajectory(thin)
        assert rep.period == 3
        assert rep.best_length < 2 * width(thin)[0]
        oracle = brute_force_oracle(thin, 200)
        assert abs(rep.best_length - oracle.length) <= oracle.grid_bound

    def test_report_invariants(self, lens):
        rep = shortest_trajectory(lens, SolverConfig(cross_check=True))
        assert rep.period in (2, 3)
        assert all(rep.best_length <= c.length for c in rep.candidates)
        assert rep.method_delta is not None and rep.method_delta < 1e-5
        assert rep.runner_up is not None and rep.runner_up.length >= rep.best_length
        for c in rep.candidates:
            assert not fits_in_translate(c.trajectory.vertices, lens).fits_strict

    def test_rounded_body(self, reuleaux):
        rep = shortest_trajectory(rounded(reuleaux, 0.1))
        assert rep.period == 2

    def test_deterministic(self, thin):
        a = shortest_trajectory(thin, SolverConfig(seed=3))
        b = shortest_trajectory(thin, SolverConfig(seed=3))
        assert dumps_lines([a]) == dumps_lines([b])


class TestBlocking:
    @pytest.mark.parametrize("name,length", [("disk", 4.0), ("reuleaux", 2.0), ("lens", 2.8)])
    def test_reference(self, request, name, length):
        B = request.getfixturevalue(name)
        c = shortest_blocking_polygon(B)
        assert c.length == pytest.approx(length, abs=1e-7)
        assert validate_trajectory(B, c.trajectory).valid

    def test_thin_matches_solver(self, thin):
        c = shortest_blocking_polygon(thin)
        assert c.period == 3
        assert abs(c.length - shortest_trajectory(thin).best_length) < 1e-5

    def test_needs_disk_polygon(self, reuleaux):
        with pytest.raises(GeometryError):
            shortest_blocking_polygon(rounded(reuleaux, 0.1))


class TestOracle:
    @pytest.mark.parametrize("name,length", [("disk", 4.0), ("reuleaux", 2.0), ("lens", 2.8)])
    def test_reference(self, request, name, length):
        B = request.getfixturevalue(name)
        res = brute_force_oracle(B, 200)
        assert abs(res.length - length) < 0.01
        assert res.grid_bound <= 0.01 * B.scale

    def test_grid_bound_shrinks(self, disk):
        assert oracle_grid_bound(disk, 400) < oracle_grid_bound(disk, 200) < oracle_grid_bound(disk, 100)

    def test_refinement_monotone(self, thin):
        coarse, fine = brute_force_oracle(thin, 100), brute_force_oracle(thin, 200)
        assert fine.length <= coarse.length + coarse.grid_bound

    @pytest.mark.parametrize("n", [2, 401])
    def test_grid_range(self, disk, n):
        with pytest.raises(ValueError):
            brute_force_oracle(disk, n)


def test_width_chord_normal_is_tight():
    # the period-2 chord must satisfy the reflection law far below eps_angle, not just at it
    from billiard_gauge.verify import body_suite
    for D in body_suite("nonfat", 20, 40) + body_suite("fat", 10, 4):
        c = shortest_2_periodic(D)
        assert validate_trajectory(D, c.trajectory).max_residual < 1e-10
