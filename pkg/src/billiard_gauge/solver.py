"""Shortest generalized billiard trajectories in the plane.

Two routes are implemented and can be compared:

* direct search: the doubled width chord for period 2 plus a multistart
  root search of the bisector condition over boundary-parameter triples;
* blocking polygons: minimum perimeter over 2- and 3-point sets that cannot
  be translated into the interior.

Boundary points are addressed by their outward normal angle, so a corner is
an interval of parameters that all map to the same point. This makes
corner-pinned trajectories ordinary interior solutions of the search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import least_squares, minimize

from . import kernels
from .billiards import Trajectory, perimeter, validate_trajectory
from .body import Body, DiskPolygon, _golden_min, width
from .geom import DEFAULT_TOL, GeometryError, Tolerance, Vec
from .translative import fits_in_translate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SolverConfig:
    n_starts: int = 64
    seed: int = 0
    direction_samples: int = 4096
    tol_length: float = 1e-7
    cross_check: bool = False

    def __post_init__(self):
        if self.n_starts <= 0 or self.direction_samples <= 0 or not self.tol_length > 0:
            raise ValueError("solver settings must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Candidate:
    trajectory: Trajectory
    length: float

    @property
    def period(self) -> int:
        return self.trajectory.period


@dataclass(frozen=True)
class SolveReport:
    best: Trajectory
    best_length: float
    period: int
    runner_up: Optional[Candidate]
    method_delta: Optional[float]
    candidates: tuple[Candidate, ...]
    blocking_ok: bool
    config: SolverConfig = field(default_factory=SolverConfig)


class BlockingSearchError(GeometryError):
    def __init__(self, message: str, best_effort=None):
        super().__init__(message)
        self.best_effort = best_effort


# ---------------------------------------------------------------- period 2

def shortest_2_periodic(B: Body, cfg: SolverConfig = SolverConfig()) -> Candidate:
    w, _, (p, q) = width(B, cfg.direction_samples)
    T = Trajectory((p, q))
    return Candidate(T, perimeter(T))


# ---------------------------------------------------------------- period 3

def _vertex_key(V: np.ndarray) -> tuple:
    return tuple(np.round(V, 12).ravel())


def _canonical(V: np.ndarray) -> np.ndarray:
    """Cyclic relabeling/reflection with the lexicographically smallest vertex list."""
    n = len(V)
    forms = []
    for W in (V, V[::-1]):
        for s in range(n):
            forms.append(np.roll(W, -s, axis=0))
    return min(forms, key=_vertex_key)


def _same_cycle(U: np.ndarray, V: np.ndarray, tol: float) -> bool:
    n = len(U)
    if len(V) != n:
        return False
    for W in (V, V[::-1]):
        for s in range(n):
            if np.max(np.hypot(*(U - np.roll(W, -s, axis=0)).T)) < tol:
                return True
    return False


def _seed_triples(B: Body, cfg: SolverConfig, rng: np.random.Generator) -> list[np.ndarray]:
    third = TWO_PI / 3.0
    seeds = []
    for k in range(3):
        base = k * third / 3.0
        seeds.append(base + np.array([0.0, third, 2 * third]))
    _, u, _ = width(B, min(cfg.direction_samples, 512))
    t = u.angle()
    for _ in range(3):
        d = rng.normal(0.0, 0.05, 2)
        seeds.append(np.array([t + d[0], t + math.pi + d[1], t + rng.uniform(0.3, math.pi - 0.3)]))
        seeds.append(np.array([t + d[0], t + math.pi + d[1], t + math.pi + rng.uniform(0.3, math.pi - 0.3)]))
    for a in B.chain.arcs:
        if a.span < TWO_PI - 1e-9:
            mid = a.start_angle + 0.5 * a.span
            seeds.append(mid + np.array([0.0, third, 2 * third]))
    corners = B.chain.corner_list
    for c in corners:
        mid = 0.5 * (c.cone_start + c.cone_end)
        seeds.append(mid + np.array([0.0, third, 2 * third]))
        seeds.append(np.array([mid, *rng.uniform(0.0, TWO_PI, 2)]))
    if len(corners) >= 3:
        mids = [0.5 * (c.cone_start + c.cone_end) for c in corners]
        for _ in range(3):
            pick = rng.choice(len(mids), 3, replace=False)
            seeds.append(np.array([mids[i] for i in sorted(pick)]))
    seeds = seeds[: cfg.n_starts // 2]
    # the rest alternate between uniform in normal angle and uniform in arc length
    cum, phis = _arclength_table(B)
    while len(seeds) < cfg.n_starts:
        if len(seeds) % 2:
            seeds.append(np.sort(rng.uniform(0.0, TWO_PI, 3)))
        else:
            s = np.sort(rng.uniform(0.0, cum[-1], 3))
            seeds.append(np.interp(s, cum, phis))
    return seeds


def _arclength_table(B: Body) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative boundary length against the normal-angle parameter."""
    cum, phis, total = [0.0], [B.chain.arcs[0].start_angle], 0.0
    for a, g in zip(B.chain.arcs, B.chain.gaps):
        total += a.radius * a.span
        cum.append(total)
        phis.append(phis[-1] + a.span)
        if g > 0.0:
            # give each corner a sliver so its whole cone is reachable
            total += 1e-9 * B.scale
            cum.append(total)
            phis.append(phis[-1] + g)
    return np.array(cum), np.array(phis)


def _polish(arcs: np.ndarray, phi0: np.ndarray) -> np.ndarray:
    def sq(phi):
        r = kernels.residual3(arcs, phi)
        return float(np.dot(r, r))

    nm = minimize(sq, phi0, method="Nelder-Mead",
                  options={"xatol": 1e-9, "fatol": 1e-24, "maxiter": 1500, "maxfev": 3000})
    phi = nm.x
    if sq(phi) > 1e-4:
        return phi
    try:
        ls = least_squares(lambda p: kernels.residual3(arcs, p), phi, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                           max_nfev=200)
        if sq(ls.x) <= sq(phi):
            phi = ls.x
    except (ValueError, FloatingPointError):
        pass
    return phi


def search_3_periodic(B: Body, cfg: SolverConfig = SolverConfig(), tol: Tolerance = DEFAULT_TOL) -> list[Candidate]:
    """Multistart search for period-3 trajectories, deduplicated and sorted by length."""
    rng = np.random.default_rng(cfg.seed)
    arcs = B.chain.array
    scale = B.scale
    diam = _diameter(B)
    found: list[np.ndarray] = []
    for phi0 in _seed_triples(B, cfg, rng):
        phi = _polish(arcs, np.asarray(phi0, dtype=float))
        r = kernels.residual3(arcs, phi)
        if np.max(np.abs(r)) > tol.eps_angle:
            continue
        pts, _ = kernels.boundary_points(arcs, phi)
        sides = np.hypot(*(pts - np.roll(pts, -1, axis=0)).T)
        if np.min(sides) < 1e-6 * diam:
            continue
        try:
            T = Trajectory(tuple(Vec(float(x), float(y)) for x, y in pts))
        except GeometryError:
            continue
        if not validate_trajectory(B, T, tol=tol).valid:
            continue
        if any(_same_cycle(pts, g, 1e-5 * scale) for g in found):
            continue
        found.append(pts)
    out = []
    for V in found:
        V = _canonical(V)
        T = Trajectory(tuple(Vec(float(x), float(y)) for x, y in V))
        out.append(Candidate(T, perimeter(T)))
    out.sort(key=lambda c: (c.length, _vertex_key(np.array([tuple(v) for v in c.trajectory.vertices]))))
    return out


# ---------------------------------------------------------------- blocking route

def _segment_blocking(D: DiskPolygon, samples: int, tol: Tolerance) -> tuple[float, float]:
    """Shortest blocking segment: minimise over directions the length that stops fitting."""
    C = D.center_array
    r = D.radius

    def lam(th: float) -> float:
        F = np.array([[0.0, 0.0], [math.cos(th), math.sin(th)]])
        return kernels.blocking_scale(F, C, r)

    th = math.pi * np.arange(samples) / samples
    vals = np.array([lam(t) for t in th])
    prev, nxt = np.roll(vals, 1), np.roll(vals, -1)
    cand = np.flatnonzero((vals <= prev) & (vals <= nxt))
    cand = cand[np.argsort(vals[cand], kind="stable")][:8]
    step = math.pi / samples
    best = (float(vals[cand[0]]), float(th[cand[0]]))
    for k in cand:
        t, v = _golden_min(lam, th[k] - step, th[k] + step, tol.eps_angle)
        if v < best[0]:
            best = (v, t)
    return best


def _triangle(x: np.ndarray) -> np.ndarray:
    th, a, b = x
    c, s = math.cos(th), math.sin(th)
    return np.array([[0.0, 0.0], [c, s], [a * c - b * s, a * s + b * c]])


def _tri_perimeter(F: np.ndarray) -> float:
    return float(np.sum(np.hypot(*(F - np.roll(F, -1, axis=0)).T)))


def _triangle_blocking(D: DiskPolygon, cfg: SolverConfig) -> tuple[float, np.ndarray]:
    """Minimise ``per(F) * scale*(F)`` over triangle shapes (scale invariant)."""
    C = D.center_array
    r = D.radius

    def h(x):
        F = _triangle(x)
        p = _tri_perimeter(F)
        if p == 0.0:
            return math.inf
        return p * kernels.blocking_scale(F, C, r)

    rng = np.random.default_rng(cfg.seed ^ 0x5EED)
    n = max(8, cfg.n_starts // 4)
    seeds = [np.array([k * TWO_PI / 9.0, 0.5, math.sqrt(3) / 2]) for k in range(3)]
    while len(seeds) < n:
        seeds.append(np.array([rng.uniform(0, TWO_PI), rng.uniform(-0.5, 1.5), rng.uniform(0.2, 1.5)]))
    def descend(x, fx, steps, maxiter):
        for step in steps:
            sim = np.vstack([x, x + np.diag([step, step, step])])
            res = minimize(h, x, method="Nelder-Mead",
                           options={"initial_simplex": sim, "xatol": 1e-11, "fatol": 1e-14, "maxiter": maxiter})
            if res.fun <= fx:
                x, fx = res.x, float(res.fun)
        return fx, x

    # cheap pass from every seed, then restarted polishing of the three best
    rough = sorted((descend(x0, h(x0), (0.2,), 300) for x0 in seeds), key=lambda t: t[0])
    polished = [descend(x, fx, (0.05, 0.005, 0.0005), 2000) for fx, x in rough[:3]]
    return min(polished, key=lambda t: t[0])


def _recentre(D: DiskPolygon, F: np.ndarray) -> np.ndarray:
    lam = kernels.blocking_scale(F, D.center_array, D.radius)
    G = lam * F
    cx, cy, _, _ = kernels.minidisk(kernels.difference_points(G, D.center_array))
    return G - np.array([cx, cy])


def shortest_blocking_polygon(D: DiskPolygon, cfg: SolverConfig = SolverConfig(),
                              tol: Tolerance = DEFAULT_TOL) -> Candidate:
    """Shortest closed 2- or 3-gon that does not fit strictly into a translate of ``D``."""
    if not isinstance(D, DiskPolygon):
        raise GeometryError("blocking-polygon search needs a disk-polygon")
    seg_len, th = _segment_blocking(D, min(cfg.direction_samples, 1024), tol)
    seg = _recentre(D, np.array([[0.0, 0.0], [math.cos(th), math.sin(th)]]))
    tri_len, x = _triangle_blocking(D, cfg)
    if tri_len < 2.0 * seg_len - cfg.tol_length * D.radius:
        V, length = _recentre(D, _triangle(x)), tri_len
    else:
        V, length = seg, 2.0 * seg_len
    T = Trajectory(tuple(Vec(float(a), float(b)) for a, b in V))
    margin = fits_in_translate(V, D, tol).margin
    if abs(margin) >= 1e-6 * D.radius:
        raise BlockingSearchError("no boundary-critical blocking polygon found", Candidate(T, length))
    return Candidate(T, perimeter(T))


# ---------------------------------------------------------------- full solve

def shortest_trajectory(B: Body, cfg: SolverConfig = SolverConfig(), tol: Tolerance = DEFAULT_TOL) -> SolveReport:
    two = shortest_2_periodic(B, cfg)
    threes = search_3_periodic(B, cfg, tol)
    cands = sorted([two, *threes], key=lambda c: (c.length, c.period))
    best = cands[0]
    delta = None
    if cfg.cross_check and isinstance(B, DiskPolygon):
        delta = abs(shortest_blocking_polygon(B, cfg, tol).length - best.length)
    blocking_ok = not fits_in_translate(best.trajectory.vertices, B, tol).fits_strict
    return SolveReport(
        best=best.trajectory,
        best_length=best.length,
        period=best.period,
        runner_up=cands[1] if len(cands) > 1 else None,
        method_delta=delta,
        candidates=tuple(cands),
        blocking_ok=blocking_ok,
        config=cfg,
    )


# ---------------------------------------------------------------- oracle

@dataclass(frozen=True)
class OracleResult:
    length: float
    trajectory: Optional[Trajectory]
    grid_bound: float
    admitted: int


def oracle_grid_bound(B: Body, grid_n: int) -> float:
    """Documented agreement bound between the oracle and the solver: ``10 (pi/n)^2`` body scales.

    Perimeter is stationary at a trajectory, so a configuration displaced by
    a fraction of a grid cell is off by a second-order amount only.
    """
    return 10.0 * (math.pi / grid_n) ** 2 * B.scale


def _residuals(arcs: np.ndarray, phis: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised bisector residuals for configurations ``phis`` of shape (M, k), k in {2, 3}."""
    M, k = phis.shape
    P, R = kernels.boundary_points(arcs, phis.ravel())
    P = P.reshape(M, k, 2)
    R = R.reshape(M, k)
    res = np.empty((M, k))
    side = np.empty((M, k))
    for v in range(k):
        a = P[:, (v - 1) % k] - P[:, v]
        b = P[:, (v + 1) % k] - P[:, v]
        la, lb = np.hypot(a[:, 0], a[:, 1]), np.hypot(b[:, 0], b[:, 1])
        side[:, v] = lb
        with np.errstate(invalid="ignore", divide="ignore"):
            w = -(a / la[:, None] + b / lb[:, None]) if k == 3 else -a / la[:, None]
        nx, ny = np.cos(phis[:, v]), np.sin(phis[:, v])
        r = np.abs(np.arctan2(nx * w[:, 1] - ny * w[:, 0], nx * w[:, 0] + ny * w[:, 1]))
        res[:, v] = np.where(np.isfinite(r), r, np.inf)
    return res, side, R


def _thresholds(side: np.ndarray, R: np.ndarray, H, factor: float) -> np.ndarray:
    """First-order residual drift within boxes of half-width ``H`` (per vertex, in normal angle)."""
    k = side.shape[1]
    H = np.broadcast_to(H, side.shape)
    mot = H * R
    thr = np.empty_like(side)
    for v in range(k):
        a, b = (v - 1) % k, (v + 1) % k
        da, db = side[:, a], side[:, v]
        with np.errstate(divide="ignore", invalid="ignore"):
            thr[:, v] = factor * (H[:, v] + (mot[:, v] + mot[:, a]) / da + (mot[:, v] + mot[:, b]) / db)
    return thr


def _refine(arcs: np.ndarray, phi: np.ndarray, h: np.ndarray, factor: float,
            levels: int = 10, sub: int = 4, beam: int = 48) -> Optional[np.ndarray]:
    """Beam search over shrinking parameter boxes; ``None`` when no box survives.

    A true trajectory within the starting box keeps passing the first-order
    test at every scale; a spurious grid hit fails once the box is smaller
    than its residual allows.
    """
    k = len(phi)
    h = np.asarray(h, dtype=float)
    offs = (np.arange(sub) + 0.5) / sub * 2.0 - 1.0
    grid = np.stack(np.meshgrid(*([offs] * k), indexing="ij"), axis=-1).reshape(-1, k)
    boxes = [np.asarray(phi, dtype=float)]
    for _ in range(levels):
        hs = h / sub
        cand = np.vstack([c + grid * h for c in boxes])
        res, side, R = _residuals(arcs, cand)
        thr = _thresholds(side, R, hs, factor)
        ok = np.all(res <= thr, axis=1) & np.all(side > 0.0, axis=1)
        if not ok.any():
            return None
        score = np.max(res / thr, axis=1)
        idx = np.flatnonzero(ok)
        idx = idx[np.argsort(score[idx], kind="stable")][:beam]
        boxes = [cand[i] for i in idx]
        h = hs
    return boxes[0]


def _diameter(B: Body) -> float:
    s = B.chain.sample(256)
    return float(np.max(np.hypot(*(s[:, None, :] - s[None, :, :]).transpose(2, 0, 1))))


def oracle_grid(B: Body, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``n`` normal angles spread by arc length plus ``diameter * angle``, with per-point half cells.

    Pure normal-angle spacing starves short smooth arcs of small bodies, pure
    arc length ignores corners; the mixture covers both.
    """
    ell = _diameter(B)
    chain = B.chain
    cum, phis = [0.0], [chain.arcs[0].start_angle]
    for a, g in zip(chain.arcs, chain.gaps):
        cum.append(cum[-1] + (a.radius + ell) * a.span)
        phis.append(phis[-1] + a.span)
        if g > 0.0:
            cum.append(cum[-1] + ell * g)
            phis.append(phis[-1] + g)
    u = (np.arange(n) + 0.5) / n * cum[-1]
    phi = np.interp(u, cum, phis)
    ext = np.concatenate([[phi[-1] - TWO_PI], phi, [phi[0] + TWO_PI]])
    half = 0.5 * np.maximum(ext[2:] - ext[1:-1], ext[1:-1] - ext[:-2])
    return phi, half


def brute_force_oracle(B: Body, grid_n: int = 200, factor: float = 1.5) -> OracleResult:
    """Exhaustive grid scan of doubled chords and vertex triples.

    Grid points are uniform in the normal angle. A configuration is admitted
    when its bisector residual stays below the first-order amount a true
    trajectory can drift within half a grid cell; admitted configurations are
    then confirmed by box refinement, shortest first.
    """
    if not 3 <= grid_n <= 400:
        raise ValueError("grid_n must lie in [3, 400]")
    arcs = B.chain.array
    best_len, best_T, admitted = math.inf, None, 0

    # doubled chords, parametrised by the normal at one end
    m = 8 * grid_n
    h = math.pi / m
    phi = TWO_PI * np.arange(m) / m
    conf = np.column_stack([phi, phi + math.pi])
    res, side, R = _residuals(arcs, conf)
    thr = _thresholds(side, R, h, factor)
    L = side[:, 0]
    ok = np.all(res <= thr, axis=1) & (L >= 2.0 * h * (R[:, 0] + R[:, 1])) & (L > 1e-12 * B.scale)
    for i in np.flatnonzero(ok)[np.argsort(L[ok], kind="stable")]:
        admitted += 1
        # the far end is slaved to the near normal, so refine in one parameter
        fine = _refine_chord(arcs, phi[i], h, factor)
        if fine is not None:
            P, _ = kernels.boundary_points(arcs, [fine, fine + math.pi])
            best_T = Trajectory((Vec(*P[0]), Vec(*P[1])))
            best_len = perimeter(best_T)
            break

    phi, half = oracle_grid(B, grid_n)
    P, rad = kernels.boundary_points(arcs, phi)
    N = np.column_stack([np.cos(phi), np.sin(phi)])
    floor = -1.0
    while True:
        per, i, j, k = kernels.oracle_triples(P, N, rad, half, factor, floor)
        if i < 0 or per >= best_len:
            break
        admitted += 1
        fine = _refine(arcs, phi[[i, j, k]], half[[i, j, k]], factor)
        if fine is not None:
            Q, _ = kernels.boundary_points(arcs, fine)
            T = Trajectory(tuple(Vec(*q) for q in Q))
            if perimeter(T) < best_len:
                best_T, best_len = T, perimeter(T)
            break
        floor = per
    return OracleResult(best_len, best_T, oracle_grid_bound(B, grid_n), admitted)


def _refine_chord(arcs: np.ndarray, phi: float, h: float, factor: float,
                  levels: int = 8, sub: int = 8, beam: int = 16) -> Optional[float]:
    offs = (np.arange(sub) + 0.5) / sub * 2.0 - 1.0
    boxes = [phi]
    for _ in range(levels):
        hs = h / sub
        c = np.concatenate([b + h * offs for b in boxes])
        conf = np.column_stack([c, c + math.pi])
        res, side, R = _residuals(arcs, conf)
        ok = np.all(res <= _thresholds(side, R, hs, factor), axis=1) & (side[:, 0] > 0.0)
        if not ok.any():
            return None
        idx = np.flatnonzero(ok)
        idx = idx[np.argsort(np.max(res[idx], axis=1), kind="stable")][:beam]
        boxes = list(c[idx])
        h = hs
    return float(boxes[0])
