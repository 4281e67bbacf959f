import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from billiard_gauge.body import build_disk_polygon, rounded
from billiard_gauge.geom import GeometryError, Vec
from billiard_gauge.translative import blocking_certificate, fits_in_translate, helly_reduce, origin_in_hull

SQ3 = math.sqrt(3.0)
R_CORNERS = [(0, 0), (1, 0), (0.5, SQ3 / 2)]


def grid_margin(F, centers, r, n=401):
    """max over translations t on a grid of min over (f, c) of r - |f - t - c|."""
    Q = np.array([[f[0] - c[0], f[1] - c[1]] for f in F for c in centers])
    lo, hi = Q.min(axis=0) - r, Q.max(axis=0) + r
    xs, ys = np.linspace(lo[0], hi[0], n), np.linspace(lo[1], hi[1], n)
    X, Y = np.meshgrid(xs, ys)
    worst = np.max(np.hypot(X[..., None] - Q[:, 0], Y[..., None] - Q[:, 1]), axis=-1)
    return r - float(worst.min()), float(max(hi - lo)) / (n - 1)


class TestFits:
    def test_slack_pair(self, disk):
        res = fits_in_translate([(0, 0), (1.5, 0)], disk)
        assert res.fits_strict and res.margin == pytest.approx(0.25)
        assert res.witness.dist(Vec(0.75, 0)) < 1e-12

    def test_tight_pair(self, disk):
        res = fits_in_translate([(0, 0), (2, 0)], disk)
        assert res.fits_closed and not res.fits_strict and abs(res.margin) < 1e-12

    def test_reuleaux_corners(self, reuleaux):
        res = fits_in_translate(R_CORNERS, reuleaux)
        assert res.fits_closed and not res.fits_strict and abs(res.margin) < 1e-12

    def test_lens_chord(self, lens):
        res = fits_in_translate([(-0.7, 0), (0.7, 0)], lens)
        assert not res.fits_strict and abs(res.margin) < 1e-12

    def test_empty(self, disk):
        with pytest.raises(GeometryError):
            fits_in_translate([], disk)

    def test_witness_places_points_inside(self, thin):
        F = [(0.1, 0.0), (0.2, 0.1), (0.0, 0.15)]
        res = fits_in_translate(F, thin)
        assert res.fits_strict
        for f in F:
            assert thin.signed_distance(Vec(*f) - res.witness) <= -res.margin + 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=4),
           st.lists(st.tuples(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4)), min_size=1, max_size=4))
    def test_margin_matches_grid(self, F, cs):
        D = build_disk_polygon(cs, 1.0)
        m = fits_in_translate(F, D).margin
        g, h = grid_margin(F, [(c.x, c.y) for c in D.centers], 1.0)
        assert g <= m + 1e-12
        assert m <= g + h  # grid node within h/sqrt(2) of the optimum

    def test_rounded_fit_against_sampling(self, reuleaux):
        R = rounded(reuleaux, 0.2)
        F = [(0.0, 0.0), (0.55, 0.1), (0.2, 0.45)]
        res = fits_in_translate(F, R)
        # brute force: worst signed distance over a translation grid
        best = -math.inf
        for tx in np.linspace(-0.6, 0.2, 81):
            for ty in np.linspace(-0.6, 0.2, 81):
                t = Vec(tx, ty)
                best = max(best, min(0.2 - R.core_signed_distance(Vec(*f) - t) for f in F))
        assert best <= res.margin + 1e-9
        assert res.margin <= best + 0.02


class TestBlocking:
    def test_helly_reuleaux_plus_incenter(self, reuleaux):
        F = R_CORNERS + [(0.5, SQ3 / 6)]
        idx = helly_reduce(F, reuleaux)
        # any two corners are a width chord, so a diametral pair is a valid answer
        assert 3 not in idx and 2 <= len(idx) <= 3
        assert not fits_in_translate([F[i] for i in idx], reuleaux).fits_strict

    def test_helly_diametral(self, disk):
        assert helly_reduce([(0, 0), (2, 0), (1, 0.1), (1, -0.1)], disk) == [0, 1]

    def test_helly_pair(self, disk):
        assert helly_reduce([(0, 0), (2, 0)], disk) == [0, 1]

    def test_helly_rejects_fitting(self, disk):
        with pytest.raises(GeometryError, match="not a blocking set"):
            helly_reduce([(0, 0), (1, 0)], disk)

    def test_certificate_strip(self, disk):
        cert = blocking_certificate([(0, 0), (2, 0)], disk)
        normals = sorted((round(n.x, 12), round(n.y, 12)) for n in cert.normals())
        assert normals == [(-1.0, 0.0), (1.0, 0.0)]
        assert cert.positively_spans()

    def test_certificate_reuleaux(self, reuleaux):
        cert = blocking_certificate(R_CORNERS, reuleaux)
        assert cert.positively_spans()
        angles = sorted({round(n.angle() % (2 * math.pi), 6) for n in cert.normals()})
        assert len(angles) >= 3
        assert origin_in_hull(cert.normals(), slack=-1e-6)  # strictly inside

    def test_certificate_lens(self, lens):
        cert = blocking_certificate([(-0.7, 0), (0.7, 0)], lens)
        assert sorted(round(n.x, 9) for n in cert.normals()) == [-1.0, 1.0]

    def test_origin_in_hull(self):
        assert not origin_in_hull([Vec(1, 0), Vec(0, 1)])
        assert origin_in_hull([Vec(1, 0), Vec(-1, 0)])
        assert not origin_in_hull([])
