"""Planar primitives: vectors, disks, tolerances, minidisk, circle meets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class GeometryError(ValueError):
    """Invalid geometric input (empty sets, degenerate configurations...)."""


@dataclass(frozen=True, slots=True)
class Vec:
    """A point or a free vector in the plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, o: Vec) -> Vec:
        return Vec(self.x + o.x, self.y + o.y)

    def __sub__(self, o: Vec) -> Vec:
        return Vec(self.x - o.x, self.y - o.y)

    def __mul__(self, s: float) -> Vec:
        return Vec(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Vec:
        return Vec(self.x / s, self.y / s)

    def __neg__(self) -> Vec:
        return Vec(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def dot(self, o: Vec) -> float:
        return self.x * o.x + self.y * o.y

    def cross(self, o: Vec) -> float:
        return self.x * o.y - self.y * o.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def normalized(self) -> Vec:
        n = self.norm()
        if n == 0.0:
            raise GeometryError("cannot normalize the zero vector")
        return Vec(self.x / n, self.y / n)

    def dist(self, o: Vec) -> float:
        return math.hypot(self.x - o.x, self.y - o.y)

    @staticmethod
    def polar(angle: float, length: float = 1.0) -> Vec:
        return Vec(length * math.cos(angle), length * math.sin(angle))


Point = Vec
Vector = Vec


def as_vec(p) -> Vec:
    if isinstance(p, Vec):
        return p
    x, y = p
    return Vec(float(x), float(y))


def as_array(points: Iterable) -> np.ndarray:
    return np.array([tuple(as_vec(p)) for p in points], dtype=float).reshape(-1, 2)


@dataclass(frozen=True, slots=True)
class Disk:
    center: Vec
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise GeometryError("disk radius must be >= 0")


@dataclass(frozen=True, slots=True)
class Tolerance:
    """Comparison slack used throughout. Lengths in body units, angles in radians."""

    eps_geom: float = 1e-9
    eps_angle: float = 1e-7

    def __post_init__(self):
        if not (self.eps_geom > 0 and self.eps_angle > 0):
            raise GeometryError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def min_enclosing_disk(points: Sequence) -> tuple[Disk, list[int]]:
    """Smallest disk covering ``points`` and the indices of its support points."""
    pts = as_array(points)
    if len(pts) == 0:
        raise GeometryError("empty point set")
    cx, cy, r, support = kernels.minidisk(pts)
    return Disk(Vec(cx, cy), r), list(support)


def circle_circle_intersection(a: Disk, b: Disk, tol: Tolerance = DEFAULT_TOL) -> list[Vec]:
    """Meeting points of two circles; two points come back ordered by angle about ``a.center``."""
    if a.radius <= 0 or b.radius <= 0:
        raise GeometryError("circle radii must be positive")
    d_vec = b.center - a.center
    d = d_vec.norm()
    if d <= tol.eps_geom and abs(a.radius - b.radius) <= tol.eps_geom:
        raise GeometryError("coincident circles")
    if d <= tol.eps_geom:
        return []
    if abs(d - (a.radius + b.radius)) < tol.eps_geom or abs(d - abs(a.radius - b.radius)) < tol.eps_geom:
        sgn = 1.0 if d > abs(a.radius - b.radius) or a.radius >= b.radius else -1.0
        return [a.center + d_vec * (sgn * a.radius / d)]
    if d > a.radius + b.radius or d < abs(a.radius - b.radius):
        return []
    along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d)
    h = math.sqrt(max(a.radius * a.radius - along * along, 0.0))
    u = d_vec / d
    base = a.center + u * along
    perp = Vec(-u.y, u.x)
    pts = [base + perp * h, base - perp * h]
    ref = d_vec.angle()

    def key(p: Vec) -> float:
        return ((p - a.center).angle() - ref) % (2.0 * math.pi)

    return sorted(pts, key=key)


def inner_bisector(a, p, b, tol: Tolerance = DEFAULT_TOL) -> Vec:
    """Unit bisector at ``p`` of the angle between ``a - p`` and ``b - p``."""
    a, p, b = as_vec(a), as_vec(p), as_vec(b)
    if a.dist(p) == 0.0 or b.dist(p) == 0.0:
        raise GeometryError("bisector neighbour coincides with the vertex")
    s = (a - p).normalized() + (b - p).normalized()
    if s.norm() < tol.eps_geom:
        raise GeometryError("straight-through vertex")
    return s.normalized()


def reflect(direction: Vec, outward_normal: Vec) -> Vec:
    """Mirror ``direction`` across the line with the given unit normal."""
    direction, n = as_vec(direction), as_vec(outward_normal)
    return direction - n * (2.0 * direction.dot(n))


def angle_diff(a: float, b: float) -> float:
    """Signed difference ``a - b`` wrapped into ``(-pi, pi]``."""
    d = math.remainder(a - b, 2.0 * math.pi)
    return d
