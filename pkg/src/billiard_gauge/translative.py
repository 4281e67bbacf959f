"""Translative containment and blocking sets.

For a disk-polygon with centers ``c_i`` and radius ``r``, a finite set F sits
inside ``t + D`` exactly when ``t`` lies within ``r`` of every ``f - c_i``.
So the whole question reduces to one smallest-enclosing-disk computation on
the difference set ``Q = {f - c_i}``: the signed margin is ``r - radius(Q)``
and the optimal translation is the minidisk center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .body import Body, DiskPolygon, RoundedBody
from .geom import DEFAULT_TOL, GeometryError, Tolerance, Vec, as_array, min_enclosing_disk


@dataclass(frozen=True)
class FitResult:
    fits_strict: bool
    fits_closed: bool
    witness: Optional[Vec]
    margin: float


@dataclass(frozen=True)
class Contact:
    point_index: int
    generator: int
    normal: Vec
    offset: float


@dataclass(frozen=True)
class BlockingCertificate:
    contacts: tuple[Contact, ...]
    translation: Vec

    def normals(self) -> list[Vec]:
        return [c.normal for c in self.contacts]

    def positively_spans(self, slack: float = 1e-9) -> bool:
        return origin_in_hull(self.normals(), slack)


def origin_in_hull(normals: Sequence[Vec], slack: float = 1e-9) -> bool:
    """Whether the origin lies in the convex hull of unit vectors (no open half-plane holds them all)."""
    if not normals:
        return False
    angles = sorted(n.angle() for n in normals)
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2.0 * math.pi - angles[-1])
    return max(gaps) <= math.pi + slack


def _difference_set(F: np.ndarray, D: DiskPolygon) -> np.ndarray:
    return kernels.difference_points(F, D.center_array)


def _rounded_fit(F: np.ndarray, B: RoundedBody, tol: Tolerance) -> tuple[float, Vec]:
    """Minimise the worst signed distance of ``F - t`` to the eroded core.

    Convex in ``t``; an SLSQP epigraph solve is cross-checked by Nelder-Mead
    and the lower value kept.
    """
    pts = [Vec(*p) for p in F]
    if B.core is None:
        cx, cy, rad, _ = kernels.minidisk(F - np.array(tuple(B.core_point)))
        return B.eps - rad, Vec(cx, cy)

    def worst(t):
        tv = Vec(t[0], t[1])
        return max(B.core_signed_distance(p - tv) for p in pts)

    def cons(z):
        tv = Vec(z[0], z[1])
        return np.array([z[2] - B.core_nearest(p - tv)[0] for p in pts])

    def cons_jac(z):
        tv = Vec(z[0], z[1])
        rows = []
        for p in pts:
            _, g = B.core_nearest(p - tv)
            rows.append([g.x, g.y, 1.0])
        return np.array(rows)

    t0 = np.mean(F, axis=0) - np.array(tuple(_core_center(B)))
    s0 = worst(t0)
    res = minimize(
        lambda z: z[2],
        np.array([t0[0], t0[1], s0]),
        jac=lambda z: np.array([0.0, 0.0, 1.0]),
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    cand = [(s0, t0)]
    if np.all(np.isfinite(res.x)):
        cand.append((worst(res.x[:2]), res.x[:2]))
    start = min(cand, key=lambda c: c[0])[1]
    nm = minimize(worst, start, method="Nelder-Mead",
                  options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 2000})
    cand.append((worst(nm.x), nm.x))
    g, t = min(cand, key=lambda c: c[0])
    return B.eps - g, Vec(float(t[0]), float(t[1]))


def _core_center(B: RoundedBody) -> Vec:
    disk, _ = min_enclosing_disk(B.core.centers)
    return disk.center


def fits_in_translate(F: Sequence, B: Body, tol: Tolerance = DEFAULT_TOL) -> FitResult:
    """Can ``F`` be moved by a translation into the body (open / closed)?

    ``F + ...`` convention: the witness ``t`` satisfies ``f - t`` in ``B``
    for every ``f``.
    """
    arr = as_array(F)
    if len(arr) == 0:
        raise GeometryError("empty point set")
    if isinstance(B, RoundedBody):
        margin, t = _rounded_fit(arr, B, tol)
    else:
        cx, cy, rad, _ = kernels.minidisk(_difference_set(arr, B))
        margin, t = B.radius - rad, Vec(cx, cy)
    closed = margin >= -tol.eps_geom
    return FitResult(
        fits_strict=margin > tol.eps_geom,
        fits_closed=closed,
        witness=t if closed else None,
        margin=float(margin),
    )


def helly_reduce(F: Sequence, D: DiskPolygon, tol: Tolerance = DEFAULT_TOL) -> list[int]:
    """At most three indices of ``F`` that already fail to fit strictly."""
    arr = as_array(F)
    if len(arr) == 0:
        raise GeometryError("empty point set")
    Q = _difference_set(arr, D)
    _, _, rad, support = kernels.minidisk(Q)
    if D.radius - rad > tol.eps_geom:
        raise GeometryError("not a blocking set")
    m = len(D.centers)
    return sorted({s // m for s in support})


def blocking_certificate(F: Sequence, D: DiskPolygon, tol: Tolerance = DEFAULT_TOL) -> BlockingCertificate:
    """Contacts at the minimax translation with outward generator normals.

    Every pair ``(f, c_i)`` on the minidisk boundary of the difference set is
    reported; their normals positively span the plane.
    """
    arr = as_array(F)
    if len(arr) == 0:
        raise GeometryError("empty point set")
    Q = _difference_set(arr, D)
    cx, cy, rad, _ = kernels.minidisk(Q)
    if D.radius - rad > tol.eps_geom:
        raise GeometryError("not a blocking set")
    t = Vec(cx, cy)
    m = len(D.centers)
    slack = max(tol.eps_geom, 1e-12 * D.radius)
    contacts = []
    for idx, q in enumerate(Q):
        v = Vec(float(q[0]) - cx, float(q[1]) - cy)
        dist = v.norm()
        if dist >= rad - slack and dist > 0.0:
            n = v / dist
            c = D.centers[idx % m]
            contacts.append(Contact(idx // m, D.generator_ids[idx % m], n, float(n.dot(c) + D.radius)))
    return BlockingCertificate(tuple(contacts), t)


def margin_of(F: Sequence, D: DiskPolygon) -> float:
    return fits_in_translate(F, D).margin
