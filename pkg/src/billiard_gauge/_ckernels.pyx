# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numeric kernels; API mirrors ``_pykernels``."""

import numpy as np
from libc.math cimport sqrt, hypot, cos, sin, atan2, fabs, fmod, INFINITY, M_PI

BACKEND = "cython"

cdef double TWO_PI = 2.0 * M_PI


cdef struct Circ:
    double x
    double y
    double r
    int s0
    int s1
    int s2
    int ns


cdef inline bint _inside(Circ* c, double x, double y) noexcept nogil:
    return hypot(x - c.x, y - c.y) <= c.r + 1e-12 * (1.0 + c.r)


cdef void _permutation(long n, long* order) noexcept nogil:
    cdef unsigned long long state = 0x9E3779B97F4A7C15ULL ^ <unsigned long long>n
    cdef long i, j, tmp
    for i in range(n):
        order[i] = i
    i = n - 1
    while i > 0:
        state ^= state << 13
        state ^= state >> 7
        state ^= state << 17
        j = <long>(state % <unsigned long long>(i + 1))
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp
        i -= 1


cdef void _circum(const double* xs, const double* ys, int a, int b, int c, Circ* out) noexcept nogil:
    cdef double ax = xs[a], ay = ys[a]
    cdef double bx = xs[b] - ax, by = ys[b] - ay
    cdef double qx = xs[c] - ax, qy = ys[c] - ay
    cdef double d = 2.0 * (bx * qy - by * qx)
    cdef double scale = fabs(bx)
    cdef double b2, q2, ux, uy, rr, t, dd, best
    cdef int i, j, bi, bj, w
    cdef int pa[3]
    cdef int pb[3]
    if fabs(by) > scale:
        scale = fabs(by)
    if fabs(qx) > scale:
        scale = fabs(qx)
    if fabs(qy) > scale:
        scale = fabs(qy)
    if scale < 1e-300:
        scale = 1e-300
    if fabs(d) <= 1e-14 * scale * scale:
        pa[0] = a; pb[0] = b
        pa[1] = a; pb[1] = c
        pa[2] = b; pb[2] = c
        best = -1.0
        bi = a
        bj = b
        for w in range(3):
            i = pa[w]
            j = pb[w]
            dd = hypot(xs[i] - xs[j], ys[i] - ys[j])
            if dd > best:
                best = dd
                bi = i
                bj = j
        out.x = 0.5 * (xs[bi] + xs[bj])
        out.y = 0.5 * (ys[bi] + ys[bj])
        out.r = 0.5 * best
        out.s0 = bi
        out.s1 = bj
        out.ns = 2
        return
    b2 = bx * bx + by * by
    q2 = qx * qx + qy * qy
    ux = (qy * b2 - by * q2) / d
    uy = (bx * q2 - qx * b2) / d
    out.x = ax + ux
    out.y = ay + uy
    rr = hypot(xs[a] - out.x, ys[a] - out.y)
    t = hypot(xs[b] - out.x, ys[b] - out.y)
    if t > rr:
        rr = t
    t = hypot(xs[c] - out.x, ys[c] - out.y)
    if t > rr:
        rr = t
    out.r = rr
    out.s0 = a
    out.s1 = b
    out.s2 = c
    out.ns = 3


cdef void _disk_two(const double* xs, const double* ys, const long* order, long m,
                    int p, int q, Circ* c) noexcept nogil:
    cdef long t
    cdef int k
    c.x = 0.5 * (xs[p] + xs[q])
    c.y = 0.5 * (ys[p] + ys[q])
    c.r = 0.5 * hypot(xs[p] - xs[q], ys[p] - ys[q])
    c.s0 = p
    c.s1 = q
    c.ns = 2
    for t in range(m):
        k = <int>order[t]
        if not _inside(c, xs[k], ys[k]):
            _circum(xs, ys, p, q, k, c)


cdef void _disk_one(const double* xs, const double* ys, const long* order, long m,
                    int p, Circ* c) noexcept nogil:
    cdef long jj
    cdef int q
    c.x = xs[p]
    c.y = ys[p]
    c.r = 0.0
    c.s0 = p
    c.ns = 1
    for jj in range(m):
        q = <int>order[jj]
        if not _inside(c, xs[q], ys[q]):
            if c.r == 0.0:
                _disk_two(xs, ys, order, 0, p, q, c)
            else:
                _disk_two(xs, ys, order, jj, p, q, c)


cdef void _minidisk_raw(const double* xs, const double* ys, long n, long* order, Circ* c) noexcept nogil:
    cdef long i
    cdef int p
    _permutation(n, order)
    p = <int>order[0]
    c.x = xs[p]
    c.y = ys[p]
    c.r = 0.0
    c.s0 = p
    c.ns = 1
    for i in range(1, n):
        p = <int>order[i]
        if not _inside(c, xs[p], ys[p]):
            _disk_one(xs, ys, order, i, p, c)


def minidisk(points):
    cdef double[:, :] pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    cdef long n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    cdef double[:] xs = np.ascontiguousarray(pts[:, 0])
    cdef double[:] ys = np.ascontiguousarray(pts[:, 1])
    cdef long[:] order = np.empty(n, dtype=np.int64)
    cdef Circ c
    _minidisk_raw(&xs[0], &ys[0], n, &order[0], &c)
    sup = [c.s0]
    if c.ns >= 2:
        sup.append(c.s1)
    if c.ns == 3:
        sup.append(c.s2)
    return c.x, c.y, c.r, tuple(sorted(set(sup)))


def difference_points(F, C, scale=1.0):
    F = np.asarray(F, dtype=float)
    C = np.asarray(C, dtype=float)
    return (scale * F[:, None, :] - C[None, :, :]).reshape(-1, 2)


cdef double _excess(const double* fx, const double* fy, long nf,
                    const double* cx, const double* cy, long nc,
                    double lam, double r, double* xs, double* ys, long* order) noexcept nogil:
    cdef long j, i, t = 0
    cdef Circ c
    for j in range(nf):
        for i in range(nc):
            xs[t] = lam * fx[j] - cx[i]
            ys[t] = lam * fy[j] - cy[i]
            t += 1
    _minidisk_raw(xs, ys, nf * nc, order, &c)
    return c.r - r


def blocking_scale(F, C, double r):
    cdef double[:, :] f = np.ascontiguousarray(F, dtype=np.float64).reshape(-1, 2)
    cdef double[:, :] cc = np.ascontiguousarray(C, dtype=np.float64).reshape(-1, 2)
    cdef long nf = f.shape[0], nc = cc.shape[0]
    cdef double[:] fx = np.ascontiguousarray(f[:, 0])
    cdef double[:] fy = np.ascontiguousarray(f[:, 1])
    cdef double[:] cx = np.ascontiguousarray(cc[:, 0])
    cdef double[:] cy = np.ascontiguousarray(cc[:, 1])
    cdef double[:] xs = np.empty(nf * nc)
    cdef double[:] ys = np.empty(nf * nc)
    cdef long[:] order = np.empty(nf * nc, dtype=np.int64)
    cdef double diam = 0.0, d, lo, hi, flo, fhi, lam, fv
    cdef long i, j, it
    cdef int side = 0
    for i in range(nf):
        for j in range(i + 1, nf):
            d = hypot(fx[i] - fx[j], fy[i] - fy[j])
            if d > diam:
                diam = d
    if diam == 0.0:
        return INFINITY
    lo = 0.0
    hi = 2.0 * r / diam
    flo = _excess(&fx[0], &fy[0], nf, &cx[0], &cy[0], nc, lo, r, &xs[0], &ys[0], &order[0])
    fhi = _excess(&fx[0], &fy[0], nf, &cx[0], &cy[0], nc, hi, r, &xs[0], &ys[0], &order[0])
    if fhi <= 0.0:
        return hi
    for it in range(200):
        lam = (lo * fhi - hi * flo) / (fhi - flo)
        if not (lo < lam < hi):
            lam = 0.5 * (lo + hi)
        fv = _excess(&fx[0], &fy[0], nf, &cx[0], &cy[0], nc, lam, r, &xs[0], &ys[0], &order[0])
        if fv == 0.0:
            return lam
        if fv < 0.0:
            lo = lam
            flo = fv
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi = lam
            fhi = fv
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo <= 4e-16 * hi:
            break
    return hi


cdef inline long _locate(const double[:, :] arcs, double phi, double* px, double* py, double* rad) noexcept nogil:
    cdef long m = arcs.shape[0]
    cdef double a0 = arcs[0, 3]
    cdef double psi = fmod(phi - a0, TWO_PI)
    cdef long lo = 0, hi = m - 1, mid
    cdef double ang, R
    if psi < 0.0:
        psi += TWO_PI
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if arcs[mid, 3] - a0 <= psi:
            lo = mid
        else:
            hi = mid - 1
    R = arcs[lo, 2]
    if psi - (arcs[lo, 3] - a0) <= arcs[lo, 4]:
        ang = phi
        rad[0] = R
    else:
        ang = arcs[lo, 3] + arcs[lo, 4]
        rad[0] = 0.0
    px[0] = arcs[lo, 0] + R * cos(ang)
    py[0] = arcs[lo, 1] + R * sin(ang)
    return lo


def boundary_points(arcs, phis):
    cdef double[:, :] a = np.ascontiguousarray(arcs, dtype=np.float64)
    cdef double[:] ph = np.ascontiguousarray(np.atleast_1d(np.asarray(phis, dtype=np.float64)))
    cdef long n = ph.shape[0], i
    out = np.empty((n, 2))
    rad = np.empty(n)
    cdef double[:, :] o = out
    cdef double[:] rd = rad
    cdef double x, y, rr
    with nogil:
        for i in range(n):
            _locate(a, ph[i], &x, &y, &rr)
            o[i, 0] = x
            o[i, 1] = y
            rd[i] = rr
    return out, rad


def residual3(arcs, phis):
    cdef double[:, :] a = np.ascontiguousarray(arcs, dtype=np.float64)
    cdef double p0 = phis[0], p1 = phis[1], p2 = phis[2]
    cdef double ph[3]
    cdef double px[3]
    cdef double py[3]
    cdef double rr, ax, ay, bx, by, la, lb, wx, wy, nx, ny
    cdef int i, ip, inx
    out = np.empty(3)
    cdef double[:] o = out
    ph[0] = p0
    ph[1] = p1
    ph[2] = p2
    for i in range(3):
        _locate(a, ph[i], &px[i], &py[i], &rr)
    for i in range(3):
        ip = (i + 2) % 3
        inx = (i + 1) % 3
        ax = px[ip] - px[i]
        ay = py[ip] - py[i]
        bx = px[inx] - px[i]
        by = py[inx] - py[i]
        la = hypot(ax, ay)
        lb = hypot(bx, by)
        if la < 1e-300 or lb < 1e-300:
            o[0] = M_PI
            o[1] = M_PI
            o[2] = M_PI
            return out
        wx = -(ax / la + bx / lb)
        wy = -(ay / la + by / lb)
        if hypot(wx, wy) < 1e-15:
            o[i] = M_PI
            continue
        nx = cos(ph[i])
        ny = sin(ph[i])
        o[i] = atan2(nx * wy - ny * wx, nx * wx + ny * wy)
    return out


def oracle_triples(P, N, rad, half_step, double factor, double floor=-1.0):
    cdef double[:, :] p = np.ascontiguousarray(P, dtype=np.float64)
    cdef double[:, :] nrm = np.ascontiguousarray(N, dtype=np.float64)
    cdef double[:] rd = np.ascontiguousarray(rad, dtype=np.float64)
    cdef long n = p.shape[0]
    cdef double[:] hs = np.array(np.broadcast_to(np.asarray(half_step, dtype=np.float64), (n,)))
    mot_arr = np.asarray(hs) * np.asarray(rd)
    cdef double[:] mot = mot_arr
    D_arr = np.empty((n, n))
    Ex_arr = np.zeros((n, n))
    Ey_arr = np.zeros((n, n))
    cdef double[:, :] D = D_arr
    cdef double[:, :] Ex = Ex_arr
    cdef double[:, :] Ey = Ey_arr
    cdef long i, j, k, t, v, aa, bb
    cdef double dx, dy, d, dmax = 0.0, tiny, per, best = INFINITY
    cdef double wx, wy, res, thr
    cdef long bi = -1, bj = -1, bk = -1
    cdef bint good
    cdef long vv[3]
    cdef long va[3]
    cdef long vb[3]
    with nogil:
        for i in range(n):
            for j in range(n):
                dx = p[j, 0] - p[i, 0]
                dy = p[j, 1] - p[i, 1]
                d = hypot(dx, dy)
                D[i, j] = d
                if d > dmax:
                    dmax = d
                if d > 0.0:
                    Ex[i, j] = dx / d
                    Ey[i, j] = dy / d
        tiny = 1e-12 * (1.0 + dmax)
        for i in range(n - 2):
            for j in range(i + 1, n - 1):
                if D[i, j] <= tiny or D[i, j] < 2.0 * (mot[i] + mot[j]):
                    continue
                for k in range(j + 1, n):
                    per = D[i, j] + D[i, k] + D[j, k]
                    if per >= best or per <= floor or D[i, k] <= tiny or D[j, k] <= tiny:
                        continue
                    if D[i, k] < 2.0 * (mot[i] + mot[k]) or D[j, k] < 2.0 * (mot[j] + mot[k]):
                        continue
                    vv[0] = i; va[0] = j; vb[0] = k
                    vv[1] = j; va[1] = i; vb[1] = k
                    vv[2] = k; va[2] = i; vb[2] = j
                    good = True
                    for t in range(3):
                        v = vv[t]
                        aa = va[t]
                        bb = vb[t]
                        wx = -(Ex[v, aa] + Ex[v, bb])
                        wy = -(Ey[v, aa] + Ey[v, bb])
                        res = fabs(atan2(nrm[v, 0] * wy - nrm[v, 1] * wx,
                                         nrm[v, 0] * wx + nrm[v, 1] * wy))
                        thr = factor * (hs[v] + (mot[v] + mot[aa]) / D[v, aa] + (mot[v] + mot[bb]) / D[v, bb])
                        if res > thr:
                            good = False
                            break
                    if good:
                        best = per
                        bi = i
                        bj = j
                        bk = k
    return (best, bi, bj, bk)
