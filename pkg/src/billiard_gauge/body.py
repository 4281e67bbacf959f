"""Disk-polygons and their roundings as convex chains of circular arcs.

Every boundary here is parameterised by the outward-normal angle ``phi``:
arc ``k`` covers normal angles ``[start_k, end_k]`` and the gap up to the
next arc's start is the normal cone of a corner. ``point_at(phi)`` is then
the support point in direction ``phi``, defined everywhere (corners absorb
whole angle intervals).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .geom import (
    DEFAULT_TOL,
    GeometryError,
    Tolerance,
    Vec,
    as_array,
    as_vec,
    min_enclosing_disk,
)

TWO_PI = 2.0 * math.pi
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Arc:
    center: Vec
    radius: float
    start_angle: float
    end_angle: float
    generator_index: Union[int, str]

    @property
    def span(self) -> float:
        return self.end_angle - self.start_angle

    def point_at(self, angle: float) -> Vec:
        return self.center + Vec.polar(angle, self.radius)

    @property
    def start_point(self) -> Vec:
        return self.point_at(self.start_angle)

    @property
    def end_point(self) -> Vec:
        return self.point_at(self.end_angle)

    def covers(self, angle: float, slack: float = 0.0) -> bool:
        off = (angle - self.start_angle) % TWO_PI
        return off <= self.span + slack or off >= TWO_PI - slack


@dataclass(frozen=True)
class Corner:
    point: Vec
    # outward normals from cone_start counterclockwise to cone_end
    cone_start: float
    cone_end: float
    arc_before: int


@dataclass(frozen=True)
class ArcChain:
    """Counterclockwise cyclic chain of arcs bounding a convex region."""

    arcs: tuple[Arc, ...]
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        if not self.arcs:
            raise GeometryError("arc chain needs at least one arc")
        for a in self.arcs:
            if not 0.0 < a.span <= TWO_PI + 1e-12:
                raise GeometryError(f"bad arc span {a.span}")
        m = len(self.arcs)
        if m > 1:
            for k in range(m):
                a, b = self.arcs[k], self.arcs[(k + 1) % m]
                if a.end_point.dist(b.start_point) > max(self.tol.eps_geom, 1e-12 * self.scale) * 10:
                    raise GeometryError("consecutive arcs do not share an endpoint")

    @cached_property
    def scale(self) -> float:
        return max(a.radius for a in self.arcs)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(
            [[a.center.x, a.center.y, a.radius, a.start_angle, a.span] for a in self.arcs],
            dtype=float,
        )

    @cached_property
    def gaps(self) -> tuple[float, ...]:
        """Normal-cone width after each arc (0 where arcs meet tangentially)."""
        m = len(self.arcs)
        if m == 1:
            return (0.0,)
        out = []
        for k in range(m):
            g = (self.arcs[(k + 1) % m].start_angle - self.arcs[k].end_angle) % TWO_PI
            # wrap noise: a gap of ~2*pi means the arcs actually touch
            out.append(0.0 if g > TWO_PI - 1e-9 else g)
        return tuple(out)

    @cached_property
    def all_corners(self) -> tuple[Corner, ...]:
        """Every junction with a nonzero normal cone."""
        out = []
        for k, g in enumerate(self.gaps):
            if g > 1e-12:
                a = self.arcs[k]
                out.append(Corner(a.end_point, a.end_angle, a.end_angle + g, k))
        return tuple(out)

    @property
    def corner_list(self) -> tuple[Corner, ...]:
        """Corners whose normal cone is wider than ``eps_angle``."""
        return tuple(c for c in self.all_corners if c.cone_end - c.cone_start > self.tol.eps_angle)

    @property
    def corners(self) -> tuple[Vec, ...]:
        return tuple(c.point for c in self.corner_list)

    def total_turning(self) -> float:
        return sum(a.span for a in self.arcs) + sum(self.gaps)

    def point_at(self, phi: float) -> Vec:
        pts, _ = kernels.boundary_points(self.array, [phi])
        return Vec(float(pts[0, 0]), float(pts[0, 1]))

    def points_at(self, phis) -> tuple[np.ndarray, np.ndarray]:
        return kernels.boundary_points(self.array, phis)

    def support(self, u: Vec) -> tuple[Vec, float]:
        u = as_vec(u)
        p = self.point_at(u.angle())
        return p, p.dot(u)

    def support_values(self, phis) -> np.ndarray:
        pts, _ = self.points_at(phis)
        phis = np.asarray(phis, dtype=float)
        return pts[:, 0] * np.cos(phis) + pts[:, 1] * np.sin(phis)

    def locate(self, p: Vec, tol: float) -> tuple[float, float, float]:
        """Nearest boundary feature to ``p``.

        Returns ``(distance, cone_start, cone_width)``; the width is 0 for a
        smooth point. A corner within ``tol`` of ``p`` takes precedence.
        """
        p = as_vec(p)
        for c in self.corner_list:
            d = p.dist(c.point)
            if d <= tol:
                return d, c.cone_start, c.cone_end - c.cone_start
        best = (math.inf, 0.0, 0.0)
        for a in self.arcs:
            v = p - a.center
            nv = v.norm()
            if nv > 0.0 and a.covers(v.angle(), 1e-12):
                d = abs(nv - a.radius)
                if d < best[0]:
                    best = (d, v.angle(), 0.0)
        for c in self.all_corners:
            d = p.dist(c.point)
            if d < best[0]:
                best = (d, c.cone_start, c.cone_end - c.cone_start)
        return best

    def distance_outside(self, x: Vec) -> tuple[float, Vec]:
        """Distance from ``x`` to the chain and the nearest boundary point."""
        best = (math.inf, x)
        for a in self.arcs:
            v = x - a.center
            nv = v.norm()
            if nv > 0.0 and a.covers(v.angle()):
                q = a.center + v * (a.radius / nv)
                d = abs(nv - a.radius)
            else:
                ps, pe = a.start_point, a.end_point
                q = ps if x.dist(ps) <= x.dist(pe) else pe
                d = x.dist(q)
            if d < best[0]:
                best = (d, q)
        return best

    def sample(self, n: int) -> np.ndarray:
        """``n`` boundary points spread by arc length."""
        lengths = np.array([a.radius * a.span for a in self.arcs])
        counts = np.maximum(1, np.round(n * lengths / lengths.sum()).astype(int))
        out = []
        for a, c in zip(self.arcs, counts):
            t = a.start_angle + a.span * np.arange(c) / c
            out.append(np.column_stack([a.center.x + a.radius * np.cos(t), a.center.y + a.radius * np.sin(t)]))
        return np.vstack(out)


def _intersect_interval(start: float, span: float, s2: float, l2: float) -> tuple[float, float]:
    """Intersect circular intervals; the second must be shorter than pi."""
    if span >= TWO_PI:
        return s2 % TWO_PI, l2
    o = (s2 - start) % TWO_PI
    for shift in (o, o - TWO_PI):
        lo = max(0.0, shift)
        hi = min(span, shift + l2)
        if hi > lo:
            return (start + lo) % TWO_PI, hi - lo
    return 0.0, 0.0


def _generator_arcs(centers: list[Vec], rho: float, ids: list[int]) -> tuple[list[Arc], list[int]]:
    arcs, pruned = [], []
    for i, ci in enumerate(centers):
        start, span = 0.0, TWO_PI
        for j, cj in enumerate(centers):
            if i == j:
                continue
            d_vec = cj - ci
            d = d_vec.norm()
            half = math.acos(min(1.0, d / (2.0 * rho)))
            start, span = _intersect_interval(start, span, d_vec.angle() - half, 2.0 * half)
            if span <= 0.0:
                break
        if span <= 1e-12:
            pruned.append(ids[i])
        else:
            arcs.append(Arc(ci, rho, start, start + span, ids[i]))
    arcs.sort(key=lambda a: a.start_angle)
    return arcs, pruned


@dataclass(frozen=True)
class DiskPolygon:
    """Intersection of congruent closed disks with common interior."""

    centers: tuple[Vec, ...]
    radius: float
    chain: ArcChain
    generator_ids: tuple[int, ...]
    pruned: tuple[int, ...] = ()
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    @property
    def scale(self) -> float:
        return self.radius

    @cached_property
    def center_array(self) -> np.ndarray:
        return as_array(self.centers)

    @cached_property
    def _minidisk(self):
        return min_enclosing_disk(self.centers)

    def contains(self, q, tol: Tolerance | None = None) -> "Location":
        tol = tol or self.tol
        q = as_vec(q)
        m = max(q.dist(c) for c in self.centers)
        if m < self.radius - tol.eps_geom:
            return Location.INSIDE
        if m <= self.radius + tol.eps_geom:
            return Location.BOUNDARY
        return Location.OUTSIDE

    def signed_distance(self, x) -> float:
        x = as_vec(x)
        m = max(x.dist(c) for c in self.centers)
        if m <= self.radius:
            return m - self.radius
        return self.chain.distance_outside(x)[0]


@dataclass(frozen=True)
class RoundedBody:
    """Union of all ``eps``-disks inside ``base``: erosion then dilation by ``eps``."""

    base: DiskPolygon
    eps: float
    chain: ArcChain
    core: DiskPolygon | None
    core_point: Vec | None = None
    tol: Tolerance = field(default=DEFAULT_TOL, repr=False)

    @property
    def scale(self) -> float:
        return self.base.radius

    def core_signed_distance(self, x) -> float:
        x = as_vec(x)
        if self.core is None:
            return x.dist(self.core_point)
        return self.core.signed_distance(x)

    def core_nearest(self, x: Vec) -> tuple[float, Vec]:
        """Signed distance to the eroded body and its gradient direction."""
        if self.core is None:
            v = x - self.core_point
            n = v.norm()
            return n, (v / n if n > 0 else Vec(1.0, 0.0))
        core = self.core
        dists = [x.dist(c) for c in core.centers]
        m = max(dists)
        if m <= core.radius:
            c = core.centers[dists.index(m)]
            v = x - c
            return m - core.radius, (v / m if m > 0 else Vec(1.0, 0.0))
        d, q = core.chain.distance_outside(x)
        return d, (x - q) / d

    def contains(self, q, tol: Tolerance | None = None) -> "Location":
        tol = tol or self.tol
        s = self.core_signed_distance(q) - self.eps
        if s < -tol.eps_geom:
            return Location.INSIDE
        if s <= tol.eps_geom:
            return Location.BOUNDARY
        return Location.OUTSIDE


Body = Union[DiskPolygon, RoundedBody]


class Location(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def build_disk_polygon(centers: Sequence, r: float, tol: Tolerance = DEFAULT_TOL) -> DiskPolygon:
    """Intersect the radius-``r`` disks about ``centers``; redundant generators are pruned.

    ``DiskPolygon.pruned`` lists input indices that contribute no boundary
    arc (including exact duplicates).
    """
    if not r > 0:
        raise GeometryError("radius must be positive")
    pts = [as_vec(c) for c in centers]
    if not pts:
        raise GeometryError("at least one center required")
    disk, _ = min_enclosing_disk(pts)
    if disk.radius >= r - tol.eps_geom:
        raise GeometryError("empty or degenerate interior")
    uniq, ids, dups = [], [], []
    for i, p in enumerate(pts):
        if any(p.dist(q) <= 1e-15 * r for q in uniq):
            dups.append(i)
        else:
            uniq.append(p)
            ids.append(i)
    if len(uniq) == 1:
        arcs = [Arc(uniq[0], r, 0.0, TWO_PI, ids[0])]
        pruned = []
    else:
        arcs, pruned = _generator_arcs(uniq, r, ids)
    chain = ArcChain(tuple(arcs), tol)
    kept = tuple(a.generator_index for a in arcs)
    by_id = dict(zip(ids, uniq))
    return DiskPolygon(
        centers=tuple(by_id[i] for i in kept),
        radius=float(r),
        chain=chain,
        generator_ids=kept,
        pruned=tuple(sorted(pruned + dups)),
        tol=tol,
    )


def is_fat(D: DiskPolygon) -> bool:
    c = D.centers
    tol = D.tol.eps_geom
    return all(c[i].dist(c[j]) <= D.radius + tol for i in range(len(c)) for j in range(i + 1, len(c)))


def contains(B: Body, q, tol: Tolerance | None = None) -> Location:
    return B.contains(q, tol)


def support(B: Body, u) -> tuple[Vec, float]:
    return B.chain.support(as_vec(u))


def _golden_min(f, a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def width(B: Body, samples: int = 4096) -> tuple[float, Vec, tuple[Vec, Vec]]:
    """Minimal width, its direction, and the chord joining the two support points.

    Coarse scan over ``samples`` directions in ``[0, pi)``, golden-section
    refinement around the best local minima.
    """
    chain = B.chain
    th = np.pi * np.arange(samples) / samples
    w = chain.support_values(th) + chain.support_values(th + np.pi)
    prev, nxt = np.roll(w, 1), np.roll(w, -1)
    cand = np.flatnonzero((w <= prev) & (w <= nxt))
    cand = cand[np.argsort(w[cand], kind="stable")][:8]
    step = np.pi / samples

    def wfun(t: float) -> float:
        v = chain.support_values([t, t + math.pi])
        return float(v[0] + v[1])

    def slope(t: float) -> float:
        # w'(t) = (p(t) - p(t + pi)) . u'(t); continuous since the body is strictly convex
        d = chain.point_at(t) - chain.point_at(t + math.pi)
        return -d.x * math.sin(t) + d.y * math.cos(t)

    best_t, best_w = float(th[cand[0]]), float(w[cand[0]])
    for k in cand:
        lo, hi = th[k] - step, th[k] + step
        t, val = _golden_min(wfun, lo, hi, B.tol.eps_angle)
        # golden section stalls near 1e-8 on a flat minimum; polish the stationary point
        a, b = max(lo, t - 4 * B.tol.eps_angle), min(hi, t + 4 * B.tol.eps_angle)
        sa, sb = slope(a), slope(b)
        if sa < 0.0 < sb:
            t2 = brentq(slope, a, b, xtol=1e-15)
            v2 = wfun(t2)
            if v2 <= val + 1e-12 * B.scale:
                t, val = t2, v2
        if val < best_w:
            best_t, best_w = t, val
    u = Vec.polar(best_t)
    p = chain.point_at(best_t)
    q = chain.point_at(best_t + math.pi)
    return best_w, u, (p, q)


def inradius(D: DiskPolygon) -> tuple[float, Vec]:
    """Largest inscribed radius ``r - R`` and incenter, ``R`` the centers' minidisk radius."""
    disk, _ = D._minidisk
    return D.radius - disk.radius, disk.center


def rounded(D: DiskPolygon, eps: float) -> RoundedBody:
    """The union of all radius-``eps`` disks lying in ``D``."""
    if not eps > 0:
        raise GeometryError("rounding radius must be positive")
    rin, center = inradius(D)
    if eps > rin * (1.0 + 1e-12):
        raise GeometryError("rounding radius exceeds inradius")
    core_r = D.radius - eps
    if core_r - (D.radius - rin) <= 1e-12 * D.radius:
        arc = Arc(center, eps, 0.0, TWO_PI, "rounding")
        return RoundedBody(D, eps, ArcChain((arc,), D.tol), None, center, D.tol)
    if len(D.centers) == 1:
        core = DiskPolygon(D.centers, core_r, ArcChain((Arc(D.centers[0], core_r, 0.0, TWO_PI, D.generator_ids[0]),), D.tol),
                           D.generator_ids, (), D.tol)
    else:
        arcs, pruned = _generator_arcs(list(D.centers), core_r, list(D.generator_ids))
        by_id = dict(zip(D.generator_ids, D.centers))
        core = DiskPolygon(
            tuple(by_id[a.generator_index] for a in arcs),
            core_r,
            ArcChain(tuple(arcs), D.tol),
            tuple(a.generator_index for a in arcs),
            tuple(pruned),
            D.tol,
        )
    out = []
    core_arcs = core.chain.arcs
    for k, a in enumerate(core_arcs):
        out.append(Arc(a.center, D.radius, a.start_angle, a.end_angle, a.generator_index))
        g = core.chain.gaps[k] if len(core_arcs) > 1 else 0.0
        if g > 0.0:
            out.append(Arc(a.end_point, eps, a.end_angle, a.end_angle + g, "rounding"))
    return RoundedBody(D, eps, ArcChain(tuple(out), D.tol), core, None, D.tol)


def hausdorff_sampled(A: Body, B: Body, n: int = 2000) -> float:
    """Sampled Hausdorff distance between two nested convex bodies via support functions."""
    th = TWO_PI * np.arange(n) / n
    return float(np.max(np.abs(A.chain.support_values(th) - B.chain.support_values(th))))
