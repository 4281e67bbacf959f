"""Pure-Python / numpy implementations of the numeric kernels.

Mirrors ``_ckernels.pyx`` function for function. Arc chains are passed as a
float64 array of shape ``(m, 5)`` with columns ``cx, cy, R, start, span``;
``start`` values are sorted ascending in ``[0, 2*pi)`` and parameterise the
boundary by outward-normal angle. Gaps between consecutive arcs are corners.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi

BACKEND = "python"


def _permutation(n):
    # xorshift Fisher-Yates; fixed seed keeps minidisk deterministic
    order = list(range(n))
    state = 0x9E3779B97F4A7C15 ^ n
    mask = 0xFFFFFFFFFFFFFFFF
    for i in range(n - 1, 0, -1):
        state ^= (state << 13) & mask
        state ^= state >> 7
        state ^= (state << 17) & mask
        j = state % (i + 1)
        order[i], order[j] = order[j], order[i]
    return order


def _inside(cx, cy, cr, x, y):
    return math.hypot(x - cx, y - cy) <= cr + 1e-12 * (1.0 + cr)


def _circumcircle(xs, ys, a, b, c):
    ax, ay = xs[a], ys[a]
    bx, by = xs[b] - ax, ys[b] - ay
    qx, qy = xs[c] - ax, ys[c] - ay
    d = 2.0 * (bx * qy - by * qx)
    scale = max(abs(bx), abs(by), abs(qx), abs(qy), 1e-300)
    if abs(d) <= 1e-14 * scale * scale:
        # collinear: diametral circle of the farthest pair
        best = None
        for i, j in ((a, b), (a, c), (b, c)):
            dd = math.hypot(xs[i] - xs[j], ys[i] - ys[j])
            if best is None or dd > best[0]:
                best = (dd, i, j)
        _, i, j = best
        return (0.5 * (xs[i] + xs[j]), 0.5 * (ys[i] + ys[j]), 0.5 * best[0], (i, j))
    b2 = bx * bx + by * by
    q2 = qx * qx + qy * qy
    ux = (qy * b2 - by * q2) / d
    uy = (bx * q2 - qx * b2) / d
    cx, cy = ax + ux, ay + uy
    rr = max(
        math.hypot(xs[a] - cx, ys[a] - cy),
        math.hypot(xs[b] - cx, ys[b] - cy),
        math.hypot(xs[c] - cx, ys[c] - cy),
    )
    return (cx, cy, rr, (a, b, c))


def _disk_two(xs, ys, prefix, p, q):
    cx, cy = 0.5 * (xs[p] + xs[q]), 0.5 * (ys[p] + ys[q])
    cr = 0.5 * math.hypot(xs[p] - xs[q], ys[p] - ys[q])
    sup = (p, q)
    for k in prefix:
        if not _inside(cx, cy, cr, xs[k], ys[k]):
            cx, cy, cr, sup = _circumcircle(xs, ys, p, q, k)
    return cx, cy, cr, sup


def _disk_one(xs, ys, prefix, p):
    cx, cy, cr = xs[p], ys[p], 0.0
    sup = (p,)
    for jj, q in enumerate(prefix):
        if not _inside(cx, cy, cr, xs[q], ys[q]):
            if cr == 0.0:
                cx, cy, cr, sup = _disk_two(xs, ys, (), p, q)
            else:
                cx, cy, cr, sup = _disk_two(xs, ys, prefix[:jj], p, q)
    return cx, cy, cr, sup


def minidisk(points):
    """Smallest enclosing disk of an ``(n, 2)`` array.

    Returns ``(cx, cy, radius, support)`` where ``support`` holds at most
    three indices into ``points``.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n == 0:
        raise ValueError("empty point set")
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()
    order = _permutation(n)
    p0 = order[0]
    cx, cy, cr, sup = xs[p0], ys[p0], 0.0, (p0,)
    for i in range(1, n):
        p = order[i]
        if not _inside(cx, cy, cr, xs[p], ys[p]):
            cx, cy, cr, sup = _disk_one(xs, ys, order[:i], p)
    return cx, cy, cr, tuple(sorted(set(sup)))


def difference_points(F, C, scale=1.0):
    """Points ``scale * f - c`` for every ``f`` in F and ``c`` in C, F-major."""
    F = np.asarray(F, dtype=float)
    C = np.asarray(C, dtype=float)
    return (scale * F[:, None, :] - C[None, :, :]).reshape(-1, 2)


def blocking_scale(F, C, r):
    """Smallest ``lam`` with minidisk radius of ``lam*F - C`` equal to ``r``.

    The radius is convex and nondecreasing in ``lam``, so the crossing is
    unique; solved by the Illinois variant of regula falsi.
    """
    F = np.asarray(F, dtype=float)
    C = np.asarray(C, dtype=float)
    diam = 0.0
    for i in range(len(F)):
        for j in range(i + 1, len(F)):
            diam = max(diam, math.hypot(*(F[i] - F[j])))
    if diam == 0.0:
        return math.inf

    def excess(lam):
        return minidisk(difference_points(F, C, lam))[2] - r

    lo, hi = 0.0, 2.0 * r / diam
    flo, fhi = excess(lo), excess(hi)
    if fhi <= 0.0:
        return hi
    side = 0
    lam = hi
    for _ in range(200):
        lam = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < lam < hi:
            lam = 0.5 * (lo + hi)
        f = excess(lam)
        if f == 0.0:
            return lam
        if f < 0.0:
            lo, flo = lam, f
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = lam, f
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo <= 4e-16 * hi:
            break
    return hi


def boundary_points(arcs, phis):
    """Boundary points, local arc radii (0 at corners) at normal angles."""
    arcs = np.asarray(arcs, dtype=float)
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    a0 = arcs[0, 3]
    rel = arcs[:, 3] - a0
    psi = np.mod(phis - a0, TWO_PI)
    k = np.searchsorted(rel, psi, side="right") - 1
    k = np.clip(k, 0, len(arcs) - 1)
    on_arc = psi - rel[k] <= arcs[k, 4]
    ang = np.where(on_arc, phis, arcs[k, 3] + arcs[k, 4])
    R = arcs[k, 2]
    pts = np.empty((len(phis), 2))
    pts[:, 0] = arcs[k, 0] + R * np.cos(ang)
    pts[:, 1] = arcs[k, 1] + R * np.sin(ang)
    rad = np.where(on_arc, R, 0.0)
    return pts, rad


def residual3(arcs, phis):
    """Signed angle between each outward normal and the negated bisector."""
    phis = np.asarray(phis, dtype=float)
    pts, _ = boundary_points(arcs, phis)
    out = np.empty(3)
    for i in range(3):
        px, py = pts[i]
        ax, ay = pts[(i - 1) % 3] - pts[i]
        bx, by = pts[(i + 1) % 3] - pts[i]
        la = math.hypot(ax, ay)
        lb = math.hypot(bx, by)
        if la < 1e-300 or lb < 1e-300:
            return np.full(3, math.pi)
        wx = -(ax / la + bx / lb)
        wy = -(ay / la + by / lb)
        if math.hypot(wx, wy) < 1e-15:
            out[i] = math.pi
            continue
        nx, ny = math.cos(phis[i]), math.sin(phis[i])
        out[i] = math.atan2(nx * wy - ny * wx, nx * wx + ny * wy)
    return out


def oracle_triples(P, N, rad, half_step, factor, floor=-1.0):
    """Exhaustive scan of unordered grid triples.

    ``half_step`` is the half cell width in normal angle, a scalar or one
    value per grid point; ``half_step * rad`` is then how far a point can
    move along the boundary within its cell. Sides shorter than twice the
    combined motion of their endpoints are skipped. A triple is admissible
    when each vertex residual is at most
    ``factor * (h_v + (m_v + m_a) / d_va + (m_v + m_b) / d_vb)``, the
    first-order drift of the residual of a true trajectory within the cells.
    Triples with perimeter ``<= floor`` are skipped, so repeated calls walk
    the admissible triples by increasing perimeter. Returns
    ``(perimeter, i, j, k)``; perimeter is ``inf`` and indices ``-1`` when
    nothing qualifies.
    """
    P = np.asarray(P, dtype=float)
    N = np.asarray(N, dtype=float)
    rad = np.asarray(rad, dtype=float)
    n = len(P)
    hs = np.broadcast_to(np.asarray(half_step, dtype=float), (n,))
    mot = hs * rad
    diff = P[None, :, :] - P[:, None, :]
    D = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        E = diff / D[..., None]
    best = (math.inf, -1, -1, -1)
    tiny = 1e-12 * (1.0 + float(D.max()))
    jj, kk = np.triu_indices(n, 1)
    for i in range(n - 2):
        sel = jj > i
        j = jj[sel]
        k = kk[sel]
        dij, dik, djk = D[i, j], D[i, k], D[j, k]
        per = dij + dik + djk
        ok = (dij > tiny) & (dik > tiny) & (djk > tiny) & (per < best[0]) & (per > floor)
        ok &= dij >= 2.0 * (mot[i] + mot[j])
        ok &= dik >= 2.0 * (mot[i] + mot[k])
        ok &= djk >= 2.0 * (mot[j] + mot[k])
        if not ok.any():
            continue
        j, k = j[ok], k[ok]
        dij, dik, djk, per = dij[ok], dik[ok], djk[ok], per[ok]
        good = np.ones(len(j), dtype=bool)
        for v, a, b, dva, dvb in (
            (np.full(len(j), i), j, k, dij, dik),
            (j, np.full(len(j), i), k, dij, djk),
            (k, np.full(len(j), i), j, dik, djk),
        ):
            s = E[v, a] + E[v, b]
            wx, wy = -s[:, 0], -s[:, 1]
            nx, ny = N[v, 0], N[v, 1]
            res = np.abs(np.arctan2(nx * wy - ny * wx, nx * wx + ny * wy))
            thr = factor * (hs[v] + (mot[v] + mot[a]) / dva + (mot[v] + mot[b]) / dvb)
            good &= res <= thr
        if good.any():
            idx = np.flatnonzero(good)
            m = idx[np.argmin(per[idx])]
            if per[m] < best[0]:
                best = (float(per[m]), i, int(j[m]), int(k[m]))
    return best
