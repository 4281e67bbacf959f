"""Generalized billiard trajectories: representation, validation, simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .body import Body, Location
from .geom import DEFAULT_TOL, GeometryError, Tolerance, Vec, angle_diff, as_vec, reflect

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Trajectory:
    """Closed polygonal path; a 2-vertex path is the doubly traversed chord."""

    vertices: tuple[Vec, ...]

    def __post_init__(self):
        vs = tuple(as_vec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 2:
            raise GeometryError("trajectory needs at least 2 vertices")
        for i in range(len(vs)):
            if vs[i] == vs[(i + 1) % len(vs)]:
                raise GeometryError("consecutive trajectory vertices coincide")

    @property
    def period(self) -> int:
        return len(self.vertices)

    def neighbours(self, i: int) -> tuple[Vec, Vec]:
        n = len(self.vertices)
        return self.vertices[(i - 1) % n], self.vertices[(i + 1) % n]


@dataclass(frozen=True)
class VertexCheck:
    on_boundary: bool
    boundary_distance: float
    bisector: Optional[Vec]
    normal_cone: tuple[Vec, ...]
    residual_angle: float


@dataclass(frozen=True)
class ValidationReport:
    vertices: tuple[VertexCheck, ...]
    valid: bool
    max_residual: float


def perimeter(T: Trajectory) -> float:
    vs = T.vertices
    return sum(vs[i].dist(vs[(i + 1) % len(vs)]) for i in range(len(vs)))


def _cone_residual(gamma: float, start: float, width: float) -> float:
    if (gamma - start) % TWO_PI <= width:
        return 0.0
    return min(abs(angle_diff(gamma, start)), abs(angle_diff(gamma, start + width)))


def validate_trajectory(
    B: Body,
    T: Trajectory,
    vertex_tol: Optional[float] = None,
    tol: Tolerance = DEFAULT_TOL,
) -> ValidationReport:
    """Check every vertex is on the boundary with its inner bisector opposite some outward normal.

    ``vertex_tol`` defaults to ``1e-7 * scale``.
    """
    vtol = 1e-7 * B.scale if vertex_tol is None else vertex_tol
    checks = []
    for i, p in enumerate(T.vertices):
        a, b = T.neighbours(i)
        dist, start, width = B.chain.locate(p, vtol)
        cone = (Vec.polar(start),) if width == 0.0 else (Vec.polar(start), Vec.polar(start + width))
        ea, eb = (a - p).normalized(), (b - p).normalized()
        s = ea + eb
        if T.period == 2:
            bis = ea
        elif s.norm() < tol.eps_geom:
            bis = None
        else:
            bis = s.normalized()
        res = math.pi if bis is None else _cone_residual((-bis).angle(), start, width)
        checks.append(VertexCheck(dist <= vtol, dist, bis, cone, res))
    max_res = max(c.residual_angle for c in checks)
    valid = all(c.on_boundary for c in checks) and max_res <= tol.eps_angle
    return ValidationReport(tuple(checks), valid, max_res)


@dataclass(frozen=True)
class ShotResult:
    bounces: tuple[tuple[Vec, Vec], ...]
    closed: bool
    period: Optional[int]


def _ray_exit(B: Body, x: Vec, d: Vec, tol: Tolerance) -> tuple[Vec, int, float]:
    scale = B.scale
    s_min = 1e-10 * scale
    best = None
    for k, arc in enumerate(B.chain.arcs):
        w = x - arc.center
        bq = w.dot(d)
        cq = w.dot(w) - arc.radius * arc.radius
        disc = bq * bq - cq
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        for s in (-bq - root, -bq + root):
            if s <= s_min:
                continue
            hit = x + d * s
            th = (hit - arc.center).angle()
            if arc.covers(th, 1e-9) and (best is None or s > best[0]):
                best = (s, hit, k, th)
    if best is None:
        raise GeometryError("ray does not meet the boundary")
    return best[1], best[2], best[3]


def _check_smooth(B: Body, k: int, th: float, tol: Tolerance) -> None:
    chain = B.chain
    m = len(chain.arcs)
    if m == 1:
        return
    arc = chain.arcs[k]
    off = (th - arc.start_angle) % TWO_PI
    if off > math.pi + arc.span / 2:
        off -= TWO_PI
    near_start = abs(off) * arc.radius <= tol.eps_geom
    near_end = abs(off - arc.span) * arc.radius <= tol.eps_geom
    if near_end and chain.gaps[k] > tol.eps_angle:
        raise GeometryError("non-smooth impact")
    if near_start and chain.gaps[(k - 1) % m] > tol.eps_angle:
        raise GeometryError("non-smooth impact")


def shoot(
    B: Body,
    start,
    direction,
    n_bounces: int,
    closure_tol: Optional[float] = None,
    tol: Tolerance = DEFAULT_TOL,
) -> ShotResult:
    """Follow the classical mirror law for ``n_bounces`` impacts.

    Returns each impact point with the outgoing direction. ``closed`` is set
    when an impact repeats the first impact state within ``closure_tol``.
    """
    x = as_vec(start)
    d = as_vec(direction).normalized()
    if B.contains(x, tol) is not Location.INSIDE:
        raise GeometryError("start point must lie strictly inside the body")
    ctol = 1e-7 * B.scale if closure_tol is None else closure_tol
    bounces = []
    period = None
    for k in range(n_bounces):
        hit, arc_idx, th = _ray_exit(B, x, d, tol)
        _check_smooth(B, arc_idx, th, tol)
        n = Vec.polar(th)
        d = reflect(d, n).normalized()
        bounces.append((hit, d))
        x = hit
        if period is None and k > 0:
            p0, d0 = bounces[0]
            if hit.dist(p0) <= ctol and (d - d0).norm() <= ctol / B.scale:
                period = k
    return ShotResult(tuple(bounces), period is not None, period)
