"""Numeric checks of the period-2 argument for fat disk-polygons and the rounding limit.

``proof_trace`` rebuilds the comparison chain from a billiard triangle ``P``
of a fat disk-polygon ``D``: the disk-triangle through the vertices of ``P``,
its maximal radius expansion, the Reuleaux triangle sitting inside, and the
truncated triangle ``P*``. Every inequality along the way lands in a ledger.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .billiards import Trajectory, perimeter, validate_trajectory
from .body import DiskPolygon, build_disk_polygon, inradius, is_fat, rounded, width
from .geom import DEFAULT_TOL, Disk, GeometryError, Tolerance, Vec, circle_circle_intersection
from .solver import SolverConfig, search_3_periodic, shortest_trajectory
from .translative import fits_in_translate

QUARTER_PI = math.pi / 4.0


# ---------------------------------------------------------------- g and Case B

def _check_alpha(x: float) -> None:
    if not 0.0 < x < QUARTER_PI:
        raise GeometryError(f"argument {x!r} outside (0, pi/4)")


def _g(x: np.ndarray) -> np.ndarray:
    # cos x + cos x/cos 2x - 1 - sqrt(1 + a^2 - 2ac), a = cos x/cos 2x, rewritten
    # so the a - sqrt(...) cancellation near pi/4 never happens
    c = np.cos(x)
    a = c / np.cos(2.0 * x)
    rad = (a - c) ** 2 + np.sin(x) ** 2
    return c - 1.0 + (2.0 * a * c - 1.0) / (a + np.sqrt(rad))


def g_of_x(x: float) -> float:
    """The Case B gap function; positive values rule the near-degenerate triangle out."""
    _check_alpha(x)
    return float(_g(np.float64(x)))


def g_naive(x: float) -> float:
    """Literal transcription, kept as an independent cross-check of ``g_of_x``."""
    _check_alpha(x)
    c, e = math.cos(x), math.cos(2.0 * x)
    rad = 1.0 + c * c / (e * e) - 2.0 * c * c / e
    return (c + c / e) - (1.0 + math.sqrt(max(rad, 0.0)))


def check_g_bounds(lo: float, hi: float, n_samples: int) -> tuple[float, bool]:
    """Minimum of g on ``linspace(lo, hi, n_samples)`` and whether the samples strictly decrease."""
    if not 0.0 < lo < hi < QUARTER_PI:
        raise GeometryError("need 0 < lo < hi < pi/4")
    if n_samples < 2:
        raise GeometryError("need at least 2 samples")
    v = _g(np.linspace(lo, hi, n_samples))
    return float(v.min()), bool(np.all(np.diff(v) < 0.0))


@dataclass(frozen=True)
class CaseBQuantities:
    eps: float
    alpha: float
    dist_ab: float
    dist_ac: float
    dist_co: float
    dist_cd_lower: float
    residual: float


def case_b_quantities(eps: float, alpha: float) -> CaseBQuantities:
    """Closed forms for the isosceles billiard triangle around a radius-``eps`` arc.

    The triangle is also built explicitly (incenter at the origin, base angles
    ``2*alpha``) and ``residual`` is the largest disagreement between measured
    and closed-form values, including the incenter and the half-perimeter
    identity behind the gap function.
    """
    if not eps > 0:
        raise GeometryError("eps must be positive")
    _check_alpha(alpha)
    ca, sa, c2 = math.cos(alpha), math.sin(alpha), math.cos(2.0 * alpha)
    ab = 2.0 * eps * ca
    ac = eps * ca / c2
    co = eps * math.sqrt(max(1.0 + ca * ca / (c2 * c2) - 2.0 * ca * ca / c2, 0.0))
    half_per = eps * (ca + ca / c2)

    o = Vec(0.0, 0.0)
    a = Vec(-eps * ca, -eps * sa)
    b = Vec(eps * ca, -eps * sa)
    c = Vec(0.0, eps * (ca * math.tan(2.0 * alpha) - sa))
    d = Vec(0.0, -eps)
    la, lb, lc = b.dist(c), a.dist(c), a.dist(b)
    incenter = (a * la + b * lb + c * lc) / (la + lb + lc)
    per = la + lb + lc
    errs = [
        a.dist(b) - ab,
        a.dist(c) - ac,
        b.dist(c) - ac,
        c.dist(o) - co,
        incenter.dist(o),
        a.dist(o) - eps,
        b.dist(o) - eps,
        per / 2.0 - half_per,
        # gap function identity: g(alpha) * eps = per/2 - dist(c, d)
        g_of_x(alpha) * eps - (per / 2.0 - c.dist(d)),
    ]
    return CaseBQuantities(eps, alpha, ab, ac, co, half_per, max(abs(e) for e in errs))


def inequality_13(alpha: float) -> tuple[float, bool]:
    """Value of the gap function and whether the required inequality ``g <= 0`` holds."""
    g = g_of_x(alpha)
    return g, g <= 0.0


# ---------------------------------------------------------------- proof trace

@dataclass(frozen=True)
class LedgerEntry:
    name: str
    lhs: float
    rhs: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class ProofTrace:
    body: DiskPolygon
    trajectory: Trajectory
    incenter: Vec
    virtual_vertices: tuple[int, ...]
    disk_triangle: DiskPolygon
    r_prime: float
    expanded: DiskPolygon
    reuleaux: DiskPolygon
    p_star: Vec
    ledger: tuple[LedgerEntry, ...]

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.ledger)


def _geq(name: str, lhs: float, rhs: float, tol: float) -> LedgerEntry:
    return LedgerEntry(name, float(lhs), float(rhs), lhs >= rhs - tol)


def _gt(name: str, lhs: float, rhs: float, tol: float) -> LedgerEntry:
    return LedgerEntry(name, float(lhs), float(rhs), lhs > rhs + tol)


def _eq(name: str, lhs: float, rhs: float, tol: float) -> LedgerEntry:
    return LedgerEntry(name, float(lhs), float(rhs), abs(lhs - rhs) <= tol)


def _diam(pts: Sequence[Vec]) -> tuple[float, int, int]:
    best = (0.0, 0, 1)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = pts[i].dist(pts[j])
            if d > best[0]:
                best = (d, i, j)
    return best


def _segment_circle(p: Vec, q: Vec, center: Vec, rad: float) -> list[Vec]:
    d = q - p
    w = p - center
    A = d.dot(d)
    Bq = w.dot(d)
    C = w.dot(w) - rad * rad
    disc = Bq * Bq - A * C
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    out = []
    for t in ((-Bq - root) / A, (-Bq + root) / A):
        if -1e-12 <= t <= 1.0 + 1e-12:
            out.append(p + d * min(max(t, 0.0), 1.0))
    return out


def proof_trace(
    D: DiskPolygon,
    P: Trajectory,
    require_smooth: bool = True,
    tol: Tolerance = DEFAULT_TOL,
) -> ProofTrace:
    """Replay the period-2 comparison chain for a billiard triangle of a fat disk-polygon.

    With ``require_smooth=False`` a vertex at a corner gets the radius-``r``
    disk that supports ``D`` there with normal opposite to the bisector (its
    "virtual" generator); such vertices are listed in ``virtual_vertices``.
    """
    if P.period != 3:
        raise GeometryError("Sublemma 2 precondition violated: trace needs a period-3 trajectory")
    if not is_fat(D):
        raise GeometryError("trace needs a fat disk-polygon")
    rep = validate_trajectory(D, P, tol=tol)
    if not rep.valid:
        raise GeometryError("trajectory does not validate")
    r = D.radius
    slack = 1e-9 * r
    ps = P.vertices
    virtual = []
    cs = []
    for i, (p, chk) in enumerate(zip(ps, rep.vertices)):
        if len(chk.normal_cone) > 1:
            if require_smooth:
                raise GeometryError("Sublemma 2 precondition violated: vertex at a corner")
            virtual.append(i)
        cs.append(p + chk.bisector * r)
    la, lb, lc = ps[1].dist(ps[2]), ps[0].dist(ps[2]), ps[0].dist(ps[1])
    c = (ps[0] * la + ps[1] * lb + ps[2] * lc) / (la + lb + lc)
    disk_tri = build_disk_polygon(cs, r, tol)
    us = [(c - p).normalized() for p in ps]

    def excess(rp: float) -> float:
        return _diam([p + u * rp for p, u in zip(ps, us)])[0] - rp

    lo, hi = r, 2.0 * r
    if excess(lo) > slack:
        raise GeometryError(f"expansion root-find: diameter exceeds r at the start (excess {excess(lo):.3e})")
    while excess(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6 * r:
            raise GeometryError(f"expansion root-find: no sign change in [{r}, {hi}]")
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    rp = lo
    cps = [p + u * rp for p, u in zip(ps, us)]
    dmax, ia, ib = _diam(cps)
    k = 3 - ia - ib
    expanded = build_disk_polygon(cps, rp, tol)

    ca, cb, ck = cps[ia], cps[ib], cps[k]
    meet = circle_circle_intersection(Disk(ca, rp), Disk(cb, rp), tol)
    side = (cb - ca).cross(ck - ca)
    c3 = max(meet, key=lambda q: side * (cb - ca).cross(q - ca))
    reuleaux = build_disk_polygon([ca, cb, c3], rp, tol)

    # (7): a point of P on the third Reuleaux circle and on the Reuleaux boundary
    star = []
    for e0, e1 in ((ps[0], ps[1]), (ps[1], ps[2]), (ps[2], ps[0])):
        for q in _segment_circle(e0, e1, c3, rp):
            if q.dist(ca) <= rp + slack and q.dist(cb) <= rp + slack:
                star.append(q)
    if not star:
        raise GeometryError("no point of P on the third Reuleaux arc")
    pa, pb = ps[ia], ps[ib]

    def star_key(q: Vec):
        blocked = not fits_in_translate([pa, pb, q], reuleaux, tol).fits_strict
        return (not blocked, pa.dist(q) + pb.dist(q))

    p_star = min(star, key=star_key)
    per_p = perimeter(P)
    per_star = pa.dist(pb) + pb.dist(p_star) + p_star.dist(pa)
    w_d = width(D)[0]
    w_tri = width(disk_tri)[0]
    w_exp = width(expanded)[0]
    reu_pts = reuleaux.chain.sample(720)
    reu_out = max(float(np.max(np.hypot(*(reu_pts - np.array(tuple(q))).T))) for q in cps) - rp
    ltol = 1e-7 * r
    ledger = (
        _geq("width_monotone: width(disk-triangle r) >= width(D)", w_tri, w_d, ltol),
        _geq("expansion_stop: r' >= diam{c'}", rp, dmax, ltol),
        _geq("expanded_width_bound: r' >= width(disk-triangle r)", rp, w_tri, ltol),
        _eq("expanded_width_equal: r' = width(disk-triangle r')", w_exp, rp, ltol),
        _eq("contact_radius: max |dist(p_i, c'_i) - r'|", max(abs(p.dist(q) - rp) for p, q in zip(ps, cps)), 0.0, ltol),
        _geq("reuleaux_inside: Reuleaux inside disk-triangle r'", 0.0, reu_out, ltol),
        _eq("p_star_on_arc: p* on third Reuleaux circle", p_star.dist(c3), rp, ltol),
        _geq("perimeter_drop: per(P) >= per(P*)", per_p, per_star, ltol),
        _gt("reuleaux_chord_bound: per(P*) > 2r'", per_star, 2.0 * rp, 0.0),
        _gt("target: per(P) > 2 width(D)", per_p, 2.0 * w_d, 0.0),
    )
    return ProofTrace(D, P, c, tuple(virtual), disk_tri, rp, expanded, reuleaux, p_star, ledger)


# ---------------------------------------------------------------- random bodies

def random_fat_disk_polygon(rng: np.random.Generator, r: float = 1.0, max_tries: int = 1000) -> DiskPolygon:
    """3 to 8 centers uniform in a disk of radius ``r/2``; thin bodies (inradius < 0.05 r) are redrawn."""
    for _ in range(max_tries):
        k = int(rng.integers(3, 9))
        rho = 0.5 * r * np.sqrt(rng.uniform(0.0, 1.0, k))
        th = rng.uniform(0.0, 2.0 * math.pi, k)
        pts = np.column_stack([rho * np.cos(th), rho * np.sin(th)])
        try:
            D = build_disk_polygon(pts, r)
        except GeometryError:
            continue
        if inradius(D)[0] >= 0.05 * r and len(D.centers) >= 2:
            return D
    raise GeometryError("fat generator kept producing degenerate bodies")


def random_nonfat_disk_polygon(rng: np.random.Generator, r: float = 1.0, max_tries: int = 1000) -> DiskPolygon:
    """3 to 5 centers near a circle of radius 0.55r to 0.95r; only non-fat results with inradius >= 0.05 r."""
    for _ in range(max_tries):
        k = int(rng.integers(3, 6))
        rho = r * rng.uniform(0.55, 0.95)
        th = 2.0 * math.pi * np.arange(k) / k + rng.uniform(-0.3, 0.3, k)
        pts = np.column_stack([rho * np.cos(th), rho * np.sin(th)])
        try:
            D = build_disk_polygon(pts, r)
        except GeometryError:
            continue
        if not is_fat(D) and inradius(D)[0] >= 0.05 * r:
            return D
    raise GeometryError("non-fat generator kept producing unusable bodies")


GENERATORS: dict[str, Callable[[np.random.Generator], DiskPolygon]] = {
    "fat": random_fat_disk_polygon,
    "nonfat": random_nonfat_disk_polygon,
}


def body_suite(kind: str, n: int, seed: int) -> list[DiskPolygon]:
    rng = np.random.default_rng(seed)
    gen = GENERATORS[kind]
    return [gen(rng) for _ in range(n)]


# ---------------------------------------------------------------- experiments

def thread_count(threads: Optional[int] = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    try:
        return max(1, int(os.environ.get("BILLIARD_GAUGE_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _body_record(job) -> dict:
    idx, D, cfg = job
    rep = shortest_trajectory(D, cfg)
    w = width(D)[0]
    threes = [c for c in rep.candidates if c.period == 3]
    trace_ok = None
    trace_error = None
    if threes and is_fat(D):
        try:
            trace_ok = proof_trace(D, threes[0].trajectory, require_smooth=False).all_hold
        except GeometryError as exc:
            trace_ok, trace_error = False, str(exc)
    return {
        "index": idx,
        "n_centers": len(D.centers),
        "period": rep.period,
        "best_length": rep.best_length,
        "two_width": 2.0 * w,
        "violation": 2.0 * w - rep.best_length,
        "n_period3": len(threes),
        "best_period3": threes[0].length if threes else None,
        "blocking_ok": rep.blocking_ok,
        "trace_ok": trace_ok,
        "trace_error": trace_error,
    }


@dataclass
class SuiteStats:
    n_bodies: int
    skipped: int
    period2_fraction: float
    max_violation: float
    trace_pass_rate: Optional[float]
    records: list = field(default_factory=list)


def experiment_theorem1(
    n_bodies: int,
    seed: int,
    generator: str = "fat",
    cfg: Optional[SolverConfig] = None,
    threads: Optional[int] = None,
) -> SuiteStats:
    """Solve a seeded random suite and tally how often period 2 wins."""
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(seed)
    gen = GENERATORS[generator]
    bodies, skipped = [], 0
    for _ in range(n_bodies):
        try:
            bodies.append(gen(rng))
        except GeometryError:
            skipped += 1
    jobs = [(i, D, SolverConfig(cfg.n_starts, (seed + i) % 2**64, cfg.direction_samples, cfg.tol_length))
            for i, D in enumerate(bodies)]
    recs = sorted(_pmap(_body_record, jobs, thread_count(threads)), key=lambda r: r["index"])
    n = len(recs)
    traced = [r["trace_ok"] for r in recs if r["trace_ok"] is not None]
    return SuiteStats(
        n_bodies=n,
        skipped=skipped,
        period2_fraction=sum(r["period"] == 2 for r in recs) / n if n else float("nan"),
        max_violation=max((r["violation"] for r in recs), default=float("nan")),
        trace_pass_rate=sum(traced) / len(traced) if traced else None,
        records=recs,
    )


def _eps_record(job) -> dict:
    D, eps, cfg = job
    rin = inradius(D)[0]
    rec = {"eps": eps, "eps_over_inradius": eps / rin}
    try:
        B = rounded(D, eps)
    except GeometryError as exc:
        rec["error"] = str(exc)
        return rec
    rep = shortest_trajectory(B, cfg)
    rec.update(period=rep.period, length=rep.best_length, two_width=2.0 * width(B)[0],
               n_period3=sum(c.period == 3 for c in rep.candidates))
    return rec


def experiment_theorem2(
    D: DiskPolygon,
    eps_list: Sequence[float],
    cfg: Optional[SolverConfig] = None,
    threads: Optional[int] = None,
) -> dict:
    """Solve the rounded bodies for each ``eps`` and report which are won by period 2."""
    cfg = cfg or SolverConfig()
    jobs = [(D, float(e), cfg) for e in eps_list]
    recs = sorted(_pmap(_eps_record, jobs, thread_count(threads)), key=lambda r: r["eps"])
    ok = [r["eps"] for r in recs if r.get("period") == 2]
    return {"inradius": inradius(D)[0], "records": recs, "largest_eps_period2": max(ok) if ok else None}


def conjecture_sweep(D: DiskPolygon, n: int = 20, cfg: Optional[SolverConfig] = None,
                     threads: Optional[int] = None) -> dict:
    """Exploratory sweep of ``eps`` up to the inradius. Reported, never asserted."""
    rin = inradius(D)[0]
    return experiment_theorem2(D, [rin * (k + 1) / n for k in range(n)], cfg, threads)
