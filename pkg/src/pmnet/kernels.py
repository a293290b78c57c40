"""Scalar numeric kernels on the controller hot path.

Everything here is written as plain float arithmetic so the whole call graph
can be compiled with numba.  Set ``PMNET_NO_NUMBA=1`` to run the identical
source uncompiled (pure python/numpy fallback); ``benchmarks/bench_kernels.py``
compares the two paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("PMNET_NO_NUMBA", "0").lower() not in (
    "1", "true", "yes")

BIG = 1e9  # clip for polytope directions left unbounded by the caller

RFOP_OK = 0
RFOP_CLIPPED = 1
RFOP_INFEASIBLE = -1

STAT_OK = 0
STAT_DEGENERATE = 1


def _cbrt(x):
    if x >= 0.0:
        return x ** (1.0 / 3.0)
    return -((-x) ** (1.0 / 3.0))


def quad_roots(a, b, c, out):
    """Real roots of a x^2 + b x + c into out[0:2]; returns count."""
    scale = abs(a) + abs(b) + abs(c)
    if scale == 0.0:
        return 0
    if abs(a) <= 1e-15 * scale:
        if abs(b) <= 1e-15 * scale:
            return 0
        out[0] = -c / b
        return 1
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if disc > -1e-12 * (b * b + abs(4.0 * a * c)):
            disc = 0.0
        else:
            return 0
    sq = math.sqrt(disc)
    if b >= 0.0:
        qq = -0.5 * (b + sq)
    else:
        qq = -0.5 * (b - sq)
    r0 = qq / a
    if qq != 0.0:
        r1 = c / qq
    else:
        r1 = 0.0
    if r0 > r1:
        r0, r1 = r1, r0
    out[0] = r0
    out[1] = r1
    return 2


def _cubic_eval(bb, cc, dd, t):
    return ((t + bb) * t + cc) * t + dd


def _cubic_polish(bb, cc, dd, t):
    ft = abs(_cubic_eval(bb, cc, dd, t))
    for _ in range(24):
        if ft == 0.0:
            return t
        fp = (3.0 * t + 2.0 * bb) * t + cc
        if abs(fp) < 1e-300:
            return t
        step = _cubic_eval(bb, cc, dd, t) / fp
        lim = 0.5 * (1.0 + abs(t))
        if step > lim:
            step = lim
        elif step < -lim:
            step = -lim
        improved = False
        for _back in range(6):
            t1 = t - step
            if t1 == t:
                break
            f1 = abs(_cubic_eval(bb, cc, dd, t1))
            if f1 < ft:
                t = t1
                ft = f1
                improved = True
                break
            step *= 0.5
        if not improved:
            return t
    return t


def _cubic_bisection(bb, cc, dd, out):
    """Sign-change isolation between the critical points of a monic cubic."""
    crit = np.empty(2)
    ncrit = quad_roots(3.0, 2.0 * bb, cc, crit)
    bound = 1.0 + max(abs(bb), abs(cc), abs(dd))
    pts = np.empty(4)
    npts = 0
    pts[npts] = -bound
    npts += 1
    for i in range(ncrit):
        if -bound < crit[i] < bound:
            pts[npts] = crit[i]
            npts += 1
    pts[npts] = bound
    npts += 1
    n = 0
    cap = out.shape[0]
    for i in range(npts - 1):
        if n >= cap:
            break
        lo = pts[i]
        hi = pts[i + 1]
        flo = _cubic_eval(bb, cc, dd, lo)
        fhi = _cubic_eval(bb, cc, dd, hi)
        if flo == 0.0:
            out[n] = lo
            n += 1
            continue
        if flo * fhi < 0.0:
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = _cubic_eval(bb, cc, dd, mid)
                if fm == 0.0:
                    lo = mid
                    hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo = mid
                    flo = fm
            out[n] = _cubic_polish(bb, cc, dd, 0.5 * (lo + hi))
            n += 1
        elif i < npts - 2:
            if abs(fhi) <= _cubic_gate(bb, cc, dd, hi):
                out[n] = hi
                n += 1
    return n


def cubic_roots(a, b, c, d, out):
    """Real roots of a x^3 + b x^2 + c x + d into out[0:3]; returns count."""
    scale = abs(a) + abs(b) + abs(c) + abs(d)
    if scale == 0.0:
        return 0
    if abs(a) <= 1e-14 * scale:
        return quad_roots(b, c, d, out)
    bb = b / a
    cc = c / a
    dd = d / a
    # depressed cubic t^3 + p t + q with x = t - bb/3
    p = cc - bb * bb / 3.0
    q = 2.0 * bb * bb * bb / 27.0 - bb * cc / 3.0 + dd
    shift = bb / 3.0
    half_q = 0.5 * q
    cube_p = (p / 3.0) ** 3
    disc = half_q * half_q + cube_p
    disc_scale = half_q * half_q + abs(cube_p)
    n = 0
    if p != 0.0 and abs(disc) <= 1e-12 * disc_scale:
        # repeated root: cancellation makes the discriminant sign meaningless
        out[0] = 3.0 * q / p - shift
        out[1] = -1.5 * q / p - shift
        n = 2
    elif disc > 0.0:
        sq = math.sqrt(disc)
        out[0] = _cbrt(-half_q + sq) + _cbrt(-half_q - sq) - shift
        n = 1
    elif p == 0.0:  # disc == 0 and p == 0: triple root
        out[0] = _cbrt(-q) - shift
        n = 1
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        theta = math.acos(arg) / 3.0
        for k in range(3):
            out[n] = m * math.cos(theta - 2.0 * math.pi * k / 3.0) - shift
            n += 1
    # rescue double roots hiding at the critical points
    crit = np.empty(2)
    ncrit = quad_roots(3.0, 2.0 * bb, cc, crit)
    for kk in range(ncrit):
        t = crit[kk]
        if abs(_cubic_eval(bb, cc, dd, t)) <= _cubic_gate(bb, cc, dd, t):
            dup = False
            for ii in range(n):
                if abs(out[ii] - t) <= 1e-7 * (1.0 + abs(t)):
                    dup = True
                    break
            if not dup and n < 3:
                out[n] = t
                n += 1
    ok = True
    for ii in range(n):
        out[ii] = _cubic_polish(bb, cc, dd, out[ii])
        if (abs(_cubic_eval(bb, cc, dd, out[ii]))
                > _cubic_gate(bb, cc, dd, out[ii])):
            ok = False
    n2 = _dedupe_sorted(out, n)
    suspect = n2 < n or n2 == 0
    for ii in range(1, n2):
        if out[ii] - out[ii - 1] <= 1e-5 * (1.0 + abs(out[ii])):
            suspect = True
    if not ok or suspect:
        # the closed form is unreliable here: re-derive every root by
        # sign-change/tangency isolation between the critical points
        nb = _cubic_bisection(bb, cc, dd, out)
        n2 = 0
        for ii in range(nb):
            cand = _cubic_polish(bb, cc, dd, out[ii])
            if (abs(_cubic_eval(bb, cc, dd, cand))
                    <= _cubic_gate(bb, cc, dd, cand)):
                out[n2] = cand
                n2 += 1
        n2 = _dedupe_sorted(out, n2)
    return n2


_EPS = 2.220446049250313e-16


def _quartic_eval(a4, a3, a2, a1, a0, x):
    return (((a4 * x + a3) * x + a2) * x + a1) * x + a0


def _quartic_gate(a4, a3, a2, a1, a0, x):
    """Backward-error acceptance threshold for a root candidate: the
    residual of a true root never exceeds a small multiple of the
    floating-point evaluation noise of the polynomial at that point."""
    ax = abs(x)
    noise = (((abs(a4) * ax + abs(a3)) * ax + abs(a2)) * ax
             + abs(a1)) * ax + abs(a0)
    return 256.0 * _EPS * noise + 1e-300


def _cubic_gate(bb, cc, dd, x):
    ax = abs(x)
    noise = ((ax + abs(bb)) * ax + abs(cc)) * ax + abs(dd)
    return 256.0 * _EPS * noise + 1e-300


def _quartic_deriv(a4, a3, a2, a1, x):
    return ((4.0 * a4 * x + 3.0 * a3) * x + 2.0 * a2) * x + a1


def _newton_polish(a4, a3, a2, a1, a0, x):
    """Damped Newton with a monotone guard: a step is kept only if it
    shrinks |p|, so exact multiple roots (where p/p' is 0/0 noise) are left
    untouched instead of being walked away from."""
    fx = abs(_quartic_eval(a4, a3, a2, a1, a0, x))
    for _ in range(12):
        if fx == 0.0:
            return x
        fp = _quartic_deriv(a4, a3, a2, a1, x)
        if fp == 0.0:
            return x
        step = _quartic_eval(a4, a3, a2, a1, a0, x) / fp
        lim = 0.5 * (1.0 + abs(x))
        if step > lim:
            step = lim
        elif step < -lim:
            step = -lim
        improved = False
        for _back in range(6):
            x1 = x - step
            if x1 == x:
                break
            f1 = abs(_quartic_eval(a4, a3, a2, a1, a0, x1))
            if f1 < fx:
                x = x1
                fx = f1
                improved = True
                break
            step *= 0.5
        if not improved:
            return x
    return x


def _quartic_bisection(a4, a3, a2, a1, a0, out):
    """Fallback: isolate roots between critical points, then bisect."""
    crit = np.empty(3)
    ncrit = cubic_roots(4.0 * a4, 3.0 * a3, 2.0 * a2, a1, crit)
    amax = max(abs(a3), abs(a2), abs(a1), abs(a0))
    bound = 1.0 + amax / abs(a4)
    pts = np.empty(5)
    npts = 0
    pts[npts] = -bound
    npts += 1
    for i in range(ncrit):
        if -bound < crit[i] < bound:
            pts[npts] = crit[i]
            npts += 1
    pts[npts] = bound
    npts += 1
    n = 0
    cap = out.shape[0]
    for i in range(npts - 1):
        if n >= cap:
            break
        lo = pts[i]
        hi = pts[i + 1]
        flo = _quartic_eval(a4, a3, a2, a1, a0, lo)
        fhi = _quartic_eval(a4, a3, a2, a1, a0, hi)
        if flo == 0.0:
            out[n] = lo
            n += 1
            continue
        if flo * fhi < 0.0:
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = _quartic_eval(a4, a3, a2, a1, a0, mid)
                if fm == 0.0:
                    lo = mid
                    hi = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo = mid
                    flo = fm
            out[n] = _newton_polish(a4, a3, a2, a1, a0, 0.5 * (lo + hi))
            n += 1
        elif i < npts - 2:
            # interior critical point resting on the axis would be an
            # even-multiplicity root; demand a near-exact residual so mere
            # local minima close to the axis are not promoted to roots
            if abs(fhi) <= _quartic_gate(a4, a3, a2, a1, a0, hi):
                out[n] = hi
                n += 1
    if n < cap:
        fend = _quartic_eval(a4, a3, a2, a1, a0, pts[npts - 1])
        if abs(fend) == 0.0:
            out[n] = pts[npts - 1]
            n += 1
    return n


def _dedupe_sorted(buf, n):
    if n <= 1:
        return n
    for i in range(1, n):
        key = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > key:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = key
    m = 1
    for i in range(1, n):
        if abs(buf[i] - buf[m - 1]) > 1e-8 * max(1.0, abs(buf[i])):
            buf[m] = buf[i]
            m += 1
    return m


def quartic_roots(a4, a3, a2, a1, a0, out):
    """All real roots of the quartic, ascending and deduplicated.

    Closed-form resolvent-cubic factorization polished by damped Newton;
    falls back to sign-change isolation between derivative roots when the
    closed form loses accuracy.  Returns the root count (-1 for the all-zero
    polynomial).
    """
    amax = max(abs(a4), abs(a3), abs(a2), abs(a1), abs(a0))
    if amax == 0.0:
        return -1
    if abs(a4) <= 1e-14 * amax:
        n = cubic_roots(a3, a2, a1, a0, out)
        for i in range(n):
            if abs(a4) > 0.0:
                out[i] = _newton_polish(a4, a3, a2, a1, a0, out[i])
        return _dedupe_sorted(out, n)
    # monic, then depressed: x = t - aa/4
    aa = a3 / a4
    bb = a2 / a4
    cc = a1 / a4
    dd = a0 / a4
    p = bb - 3.0 * aa * aa / 8.0
    q = cc - 0.5 * aa * bb + aa * aa * aa / 8.0
    r = dd - 0.25 * aa * cc + aa * aa * bb / 16.0 - 3.0 * aa ** 4 / 256.0
    shift = 0.25 * aa
    work = np.empty(4)
    n = 0
    if q == 0.0:
        # biquadratic: z^2 + p z + r = 0 with z = t^2
        zr = np.empty(2)
        nz = quad_roots(1.0, p, r, zr)
        for i in range(nz):
            z = zr[i]
            if z < 0.0:
                if z > -1e-10 * (1.0 + abs(p) + abs(r)):
                    z = 0.0
                else:
                    continue
            s = math.sqrt(z)
            work[n] = s - shift
            n += 1
            if s > 0.0:
                work[n] = -s - shift
                n += 1
    else:
        cr = np.empty(3)
        nm = cubic_roots(1.0, p, 0.25 * p * p - r, -0.125 * q * q, cr)
        m = cr[0]
        for i in range(1, nm):
            if cr[i] > m:
                m = cr[i]
        if m > 0.0:
            s = math.sqrt(2.0 * m)
            t2 = 0.5 * p + m
            qr = np.empty(2)
            n1 = quad_roots(1.0, -s, t2 + 0.5 * q / s, qr)
            for i in range(n1):
                work[n] = qr[i] - shift
                n += 1
            n2 = quad_roots(1.0, s, t2 - 0.5 * q / s, qr)
            for i in range(n2):
                work[n] = qr[i] - shift
                n += 1
    ok = True
    for i in range(n):
        work[i] = _newton_polish(a4, a3, a2, a1, a0, work[i])
        if (abs(_quartic_eval(a4, a3, a2, a1, a0, work[i]))
                > _quartic_gate(a4, a3, a2, a1, a0, work[i])):
            ok = False
    n2 = _dedupe_sorted(work, n)
    suspect = n2 < n or n2 == 0
    for i in range(1, n2):
        if work[i] - work[i - 1] <= 1e-5 * (1.0 + abs(work[i])):
            suspect = True  # clustered roots: Newton capture is possible
    if not ok or suspect:
        # the closed form is unreliable here (lost, captured or clustered
        # roots): re-derive every root by sign-change/tangency isolation
        # between the critical points, which is structurally complete
        nb = _quartic_bisection(a4, a3, a2, a1, a0, work)
        n2 = 0
        for i in range(nb):
            cand = _newton_polish(a4, a3, a2, a1, a0, work[i])
            res = abs(_quartic_eval(a4, a3, a2, a1, a0, cand))
            if res <= _quartic_gate(a4, a3, a2, a1, a0, cand):
                work[n2] = cand
                n2 += 1
        n2 = _dedupe_sorted(work, n2)
    for i in range(n2):
        out[i] = work[i]
    return n2


# ---------------------------------------------------------------------------
# univariate rational segments h(r) = (f2 r^2 + f1 r + f0) / (g1 r + g0)
# ---------------------------------------------------------------------------

def seg_eval(f2, f1, f0, g1, g0, r):
    return ((f2 * r + f1) * r + f0) / (g1 * r + g0)


def seg_delta(f2, f1, f0, g1, g0):
    """Constant convexity indicator of h: positive => convex on the domain."""
    d1 = f1 * g0 - f0 * g1
    return 2.0 * f2 * g0 * g0 - 2.0 * g1 * d1


def segment_min(f2, f1, f0, g1, g0, r1):
    """Minimize h over [0, r1] (g > 0 there); returns (r*, h(r*)).

    Branches on the signs of the convexity indicator and of h'(0).  The
    critical radius is the stationary point in the convex-decreasing branch
    and the break-even radius h(r) = h(0) in the concave-increasing branch;
    both come from a quadratic.  Ties prefer the smaller r.
    """
    if r1 <= 0.0:
        return 0.0, f0 / g0
    d1 = f1 * g0 - f0 * g1  # sign of h'(0)
    delta = 2.0 * f2 * g0 * g0 - 2.0 * g1 * d1
    if delta < 0.0 and d1 > 0.0:
        den = f2 * g0
        if den < 0.0:
            rs = -d1 / den
            if r1 > rs:
                return r1, seg_eval(f2, f1, f0, g1, g0, r1)
        return 0.0, f0 / g0
    if delta > 0.0 and d1 < 0.0:
        # smallest positive root of (g f' - f g')(r) = 0
        rr = np.empty(2)
        nr = quad_roots(f2 * g1, 2.0 * f2 * g0, d1, rr)
        rs = math.inf
        for i in range(nr):
            if rr[i] > 0.0 and rr[i] < rs:
                rs = rr[i]
        if r1 > rs:
            return rs, seg_eval(f2, f1, f0, g1, g0, rs)
        return r1, seg_eval(f2, f1, f0, g1, g0, r1)
    if delta >= 0.0 and d1 >= 0.0:
        return 0.0, f0 / g0
    return r1, seg_eval(f2, f1, f0, g1, g0, r1)


# ---------------------------------------------------------------------------
# bivariate rational objective H(x, y); coefficient layout C[0..8] = C1..C9
# ---------------------------------------------------------------------------

def rational_eval(C, x, y):
    num = (C[0] * x * x + C[1] * y * y + C[2] * x * y + C[3] * x + C[4] * y
           + C[5])
    return num / (C[6] * x + C[7] * y + C[8])


def line_restrict(C, x0, y0, dx, dy):
    """Coefficients of h(r) = H(x0 + r dx, y0 + r dy); exact composition."""
    f2 = C[0] * dx * dx + C[1] * dy * dy + C[2] * dx * dy
    f1 = (2.0 * C[0] * x0 * dx + 2.0 * C[1] * y0 * dy
          + C[2] * (x0 * dy + y0 * dx) + C[3] * dx + C[4] * dy)
    f0 = (C[0] * x0 * x0 + C[1] * y0 * y0 + C[2] * x0 * y0 + C[3] * x0
          + C[4] * y0 + C[5])
    g1 = C[6] * dx + C[7] * dy
    g0 = C[6] * x0 + C[7] * y0 + C[8]
    return f2, f1, f0, g1, g0


def gradient_conics(C, q1, q2):
    """Numerators of dH/dx and dH/dy as conics (xx, yy, xy, x, y, 1)."""
    q1[0] = C[0] * C[6]
    q1[1] = C[2] * C[7] - C[1] * C[6]
    q1[2] = 2.0 * C[0] * C[7]
    q1[3] = 2.0 * C[0] * C[8]
    q1[4] = C[3] * C[7] + C[2] * C[8] - C[4] * C[6]
    q1[5] = C[3] * C[8] - C[5] * C[6]
    q2[0] = C[2] * C[6] - C[0] * C[7]
    q2[1] = C[1] * C[7]
    q2[2] = 2.0 * C[1] * C[6]
    q2[3] = C[4] * C[6] + C[2] * C[8] - C[3] * C[7]
    q2[4] = 2.0 * C[1] * C[8]
    q2[5] = C[4] * C[8] - C[5] * C[7]


def _conic_eval(q, x, y):
    return (q[0] * x * x + q[1] * y * y + q[2] * x * y + q[3] * x + q[4] * y
            + q[5])


def _conic_scale(q):
    s = 0.0
    for i in range(6):
        if abs(q[i]) > s:
            s = abs(q[i])
    return s


def _newton2(q1, q2, x, y):
    for _ in range(4):
        r1 = _conic_eval(q1, x, y)
        r2 = _conic_eval(q2, x, y)
        j11 = 2.0 * q1[0] * x + q1[2] * y + q1[3]
        j12 = 2.0 * q1[1] * y + q1[2] * x + q1[4]
        j21 = 2.0 * q2[0] * x + q2[2] * y + q2[3]
        j22 = 2.0 * q2[1] * y + q2[2] * x + q2[4]
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-300:
            break
        dx = (r1 * j22 - r2 * j12) / det
        dy = (j11 * r2 - j21 * r1) / det
        x -= dx
        y -= dy
    return x, y


def stationary_points(C, pts):
    """Real joint zeros of the two gradient conics, by quartic reduction.

    Fills ``pts`` (shape (8, 2)) and returns (count, status); status is
    ``STAT_DEGENERATE`` when the conic pair has a common component (or one
    conic vanishes identically), which leaves the stationary set ill-posed.
    """
    q1 = np.empty(6)
    q2 = np.empty(6)
    gradient_conics(C, q1, q2)
    cs = 0.0
    for i in range(9):
        if abs(C[i]) > cs:
            cs = abs(C[i])
    ref = cs * cs
    s1 = _conic_scale(q1)
    s2 = _conic_scale(q2)
    if s1 <= 1e-13 * ref or s2 <= 1e-13 * ref:
        return 0, STAT_DEGENERATE
    # per conic, as a polynomial in y: a y^2 + (b1 x + b0) y + (c2 x^2 + c1 x + c0)
    a1 = q1[1]
    b1_1, b1_0 = q1[2], q1[4]
    c1_2, c1_1, c1_0 = q1[0], q1[3], q1[5]
    a2 = q2[1]
    b2_1, b2_0 = q2[2], q2[4]
    c2_2, c2_1, c2_0 = q2[0], q2[3], q2[5]
    lin1 = abs(a1) <= 1e-13 * s1
    lin2 = abs(a2) <= 1e-13 * s2
    poly = np.zeros(5)  # ascending coefficients of the eliminant in x
    if not lin1 and not lin2:
        # Bezout resultant of the two quadratics in y
        e0 = a1 * c2_0 - a2 * c1_0
        e1 = a1 * c2_1 - a2 * c1_1
        e2 = a1 * c2_2 - a2 * c1_2
        f0 = a1 * b2_0 - a2 * b1_0
        f1 = a1 * b2_1 - a2 * b1_1
        g0 = b1_0 * c2_0 - b2_0 * c1_0
        g1 = b1_0 * c2_1 + b1_1 * c2_0 - b2_0 * c1_1 - b2_1 * c1_0
        g2 = b1_0 * c2_2 + b1_1 * c2_1 - b2_0 * c1_2 - b2_1 * c1_1
        g3 = b1_1 * c2_2 - b2_1 * c1_2
        poly[0] = e0 * e0 - f0 * g0
        poly[1] = 2.0 * e0 * e1 - f0 * g1 - f1 * g0
        poly[2] = e1 * e1 + 2.0 * e0 * e2 - f0 * g2 - f1 * g1
        poly[3] = 2.0 * e1 * e2 - f0 * g3 - f1 * g2
        poly[4] = e2 * e2 - f1 * g3
    elif lin1 != lin2:
        # one conic linear in y: substitute y = -c/b into the other
        if lin1:
            al = a2
            bl1, bl0 = b1_1, b1_0
            cl2, cl1, cl0 = c1_2, c1_1, c1_0
            bq1, bq0 = b2_1, b2_0
            cq2, cq1, cq0 = c2_2, c2_1, c2_0
        else:
            al = a1
            bl1, bl0 = b2_1, b2_0
            cl2, cl1, cl0 = c2_2, c2_1, c2_0
            bq1, bq0 = b1_1, b1_0
            cq2, cq1, cq0 = c1_2, c1_1, c1_0
        # al*cl^2 - bq*cl*bl + cq*bl^2 = 0
        # cl^2 (deg 4)
        poly[0] = al * cl0 * cl0
        poly[1] = al * 2.0 * cl0 * cl1
        poly[2] = al * (cl1 * cl1 + 2.0 * cl0 * cl2)
        poly[3] = al * 2.0 * cl1 * cl2
        poly[4] = al * cl2 * cl2
        # - bq*bl*cl (deg 4)
        bb0 = bq0 * bl0
        bb1 = bq0 * bl1 + bq1 * bl0
        bb2 = bq1 * bl1
        poly[0] -= bb0 * cl0
        poly[1] -= bb0 * cl1 + bb1 * cl0
        poly[2] -= bb0 * cl2 + bb1 * cl1 + bb2 * cl0
        poly[3] -= bb1 * cl2 + bb2 * cl1
        poly[4] -= bb2 * cl2
        # + cq*bl^2 (deg 4)
        s0 = bl0 * bl0
        ss1 = 2.0 * bl0 * bl1
        ss2 = bl1 * bl1
        poly[0] += cq0 * s0
        poly[1] += cq0 * ss1 + cq1 * s0
        poly[2] += cq0 * ss2 + cq1 * ss1 + cq2 * s0
        poly[3] += cq1 * ss2 + cq2 * ss1
        poly[4] += cq2 * ss2
    else:
        # both linear in y: b1*c2 - b2*c1 = 0 (cubic in x)
        poly[0] = b1_0 * c2_0 - b2_0 * c1_0
        poly[1] = b1_0 * c2_1 + b1_1 * c2_0 - b2_0 * c1_1 - b2_1 * c1_0
        poly[2] = b1_0 * c2_2 + b1_1 * c2_1 - b2_0 * c1_2 - b2_1 * c1_1
        poly[3] = b1_1 * c2_2 - b2_1 * c1_2
        poly[4] = 0.0
    pscale = 0.0
    for i in range(5):
        if abs(poly[i]) > pscale:
            pscale = abs(poly[i])
    if pscale <= 1e-12 * max(s1 * s2, ref * ref):
        return 0, STAT_DEGENERATE
    xr = np.empty(4)
    nx = quartic_roots(poly[4], poly[3], poly[2], poly[1], poly[0], xr)
    if nx < 0:
        return 0, STAT_DEGENERATE
    n = 0
    yy = np.empty(2)
    for ix in range(nx):
        x = xr[ix]
        b1x = b1_1 * x + b1_0
        b2x = b2_1 * x + b2_0
        c1x = (c1_2 * x + c1_1) * x + c1_0
        c2x = (c2_2 * x + c2_1) * x + c2_0
        ny = 0
        if not lin1 and not lin2:
            den = a2 * b1x - a1 * b2x
            if abs(den) > 1e-10 * (abs(a2 * b1x) + abs(a1 * b2x) + s1 + s2):
                yy[0] = (a1 * c2x - a2 * c1x) / den
                ny = 1
            else:
                ny = quad_roots(a1, b1x, c1x, yy)
        elif lin1:
            if abs(b1x) > 1e-10 * s1 * (1.0 + abs(x)):
                yy[0] = -c1x / b1x
                ny = 1
            else:
                ny = quad_roots(a2, b2x, c2x, yy)
        elif lin2:
            if abs(b2x) > 1e-10 * s2 * (1.0 + abs(x)):
                yy[0] = -c2x / b2x
                ny = 1
            else:
                ny = quad_roots(a1, b1x, c1x, yy)
        else:
            if abs(b1x) > 1e-10 * s1 * (1.0 + abs(x)):
                yy[0] = -c1x / b1x
                ny = 1
            elif abs(b2x) > 1e-10 * s2 * (1.0 + abs(x)):
                yy[0] = -c2x / b2x
                ny = 1
        for iy in range(ny):
            px, py = _newton2(q1, q2, x, yy[iy])
            m2 = 1.0 + px * px + py * py
            if (abs(_conic_eval(q1, px, py)) <= 1e-7 * s1 * m2
                    and abs(_conic_eval(q2, px, py)) <= 1e-7 * s2 * m2):
                dup = False
                for k in range(n):
                    if (abs(pts[k, 0] - px) + abs(pts[k, 1] - py)
                            <= 1e-8 * (1.0 + abs(px) + abs(py))):
                        dup = True
                        break
                if not dup and n < 8:
                    pts[n, 0] = px
                    pts[n, 1] = py
                    n += 1
    return n, STAT_OK


def rfop_solve(C, P, L, Q, M, N):
    """Globally minimize H over {0<=x<=N, 0<=y<=min(Px+L, -Qx+M)}.

    Candidate pool = feasible stationary points plus the minimizer of H on
    each boundary segment; ties resolve to the lexicographically smallest
    (x, y).  Infinite L/M/N drop the matching constraint; directions left
    unbounded are clipped at ``BIG`` and flagged.  Returns
    (x, y, value, status).
    """
    if M < 0.0 or N < 0.0:
        return 0.0, 0.0, math.inf, RFOP_INFEASIBLE
    clipped = False
    x_hi = N
    if Q > 0.0 and math.isfinite(M):
        mq = M / Q
        if mq < x_hi:
            x_hi = mq
    if not math.isfinite(x_hi) or x_hi > BIG:
        x_hi = BIG
        clipped = True
    Lf = L
    Mf = M
    ub0 = min(Lf, Mf)
    if not math.isfinite(ub0) or ub0 > BIG:
        ub0 = BIG
        clipped = True
    cx = np.empty(16)
    cy = np.empty(16)
    nc = 0
    cx[nc] = 0.0
    cy[nc] = 0.0
    nc += 1
    # Step 1: interior stationary points (clamped into the polytope)
    pts = np.empty((8, 2))
    nst, stat = stationary_points(C, pts)
    if stat == STAT_OK:
        for k in range(nst):
            px = pts[k, 0]
            py = pts[k, 1]
            tol = 1e-9 * (1.0 + x_hi)
            if px < -tol or px > x_hi + tol or py < -tol:
                continue
            ubx = px * P + Lf
            alt = -Q * px + Mf
            if alt < ubx:
                ubx = alt
            if ubx > BIG:
                ubx = BIG
            if py > ubx + tol * (1.0 + abs(ubx)):
                continue
            if px < 0.0:
                px = 0.0
            elif px > x_hi:
                px = x_hi
            if py < 0.0:
                py = 0.0
            elif py > ubx:
                py = ubx
            cx[nc] = px
            cy[nc] = py
            nc += 1
    # Step 2: boundary segments (anchor, direction, length)
    sx0 = np.empty(5)
    sy0 = np.empty(5)
    sdx = np.empty(5)
    sdy = np.empty(5)
    slen = np.empty(5)
    ns = 0
    # bottom edge
    sx0[ns] = 0.0
    sy0[ns] = 0.0
    sdx[ns] = 1.0
    sdy[ns] = 0.0
    slen[ns] = x_hi
    ns += 1
    # left edge
    if ub0 > 0.0:
        sx0[ns] = 0.0
        sy0[ns] = 0.0
        sdx[ns] = 0.0
        sdy[ns] = 1.0
        slen[ns] = ub0
        ns += 1
    # right edge
    ub_hi = P * x_hi + Lf
    alt = -Q * x_hi + Mf
    if alt < ub_hi:
        ub_hi = alt
    if ub_hi > BIG:
        ub_hi = BIG
        clipped = True
    if x_hi > 0.0 and ub_hi > 0.0:
        sx0[ns] = x_hi
        sy0[ns] = 0.0
        sdx[ns] = 0.0
        sdy[ns] = 1.0
        slen[ns] = ub_hi
        ns += 1
    # top envelope: rising line (P, Lf) vs falling line (-Q, Mf)
    use1 = math.isfinite(L)
    use2 = math.isfinite(M)
    if not use1 and not use2:
        # fully open above: clipped flat lid at BIG
        sx0[ns] = 0.0
        sy0[ns] = BIG
        sdx[ns] = 1.0
        sdy[ns] = 0.0
        slen[ns] = x_hi
        ns += 1
        clipped = True
    elif use1 and not use2:
        sx0[ns] = 0.0
        sy0[ns] = Lf
        sdx[ns] = 1.0
        sdy[ns] = P
        slen[ns] = x_hi
        ns += 1
    elif use2 and not use1:
        sx0[ns] = 0.0
        sy0[ns] = Mf
        sdx[ns] = 1.0
        sdy[ns] = -Q
        slen[ns] = x_hi
        ns += 1
    else:
        if P + Q > 0.0:
            xc = (Mf - Lf) / (P + Q)
        else:
            xc = math.inf if Lf <= Mf else -math.inf
        if xc <= 0.0:
            sx0[ns] = 0.0
            sy0[ns] = Mf
            sdx[ns] = 1.0
            sdy[ns] = -Q
            slen[ns] = x_hi
            ns += 1
        elif xc >= x_hi:
            sx0[ns] = 0.0
            sy0[ns] = Lf
            sdx[ns] = 1.0
            sdy[ns] = P
            slen[ns] = x_hi
            ns += 1
        else:
            sx0[ns] = 0.0
            sy0[ns] = Lf
            sdx[ns] = 1.0
            sdy[ns] = P
            slen[ns] = xc
            ns += 1
            sx0[ns] = xc
            sy0[ns] = -Q * xc + Mf
            sdx[ns] = 1.0
            sdy[ns] = -Q
            slen[ns] = x_hi - xc
            ns += 1
    for s in range(ns):
        f2, f1, f0, g1, g0 = line_restrict(C, sx0[s], sy0[s], sdx[s], sdy[s])
        rs, _ = segment_min(f2, f1, f0, g1, g0, slen[s])
        px = sx0[s] + rs * sdx[s]
        py = sy0[s] + rs * sdy[s]
        if px < 0.0:
            px = 0.0
        elif px > x_hi:
            px = x_hi
        if py < 0.0:
            py = 0.0
        cx[nc] = px
        cy[nc] = py
        nc += 1
    # Step 3: lexicographic argmin over the pool
    bx = cx[0]
    by = cy[0]
    bv = rational_eval(C, bx, by)
    for k in range(1, nc):
        v = rational_eval(C, cx[k], cy[k])
        tie = 1e-12 * max(1.0, abs(bv))
        if v < bv - tie:
            bx, by, bv = cx[k], cy[k], v
        elif v <= bv + tie:
            if cx[k] < bx or (cx[k] == bx and cy[k] < by):
                bx, by = cx[k], cy[k]
                if v < bv:
                    bv = v
    status = RFOP_CLIPPED if clipped else RFOP_OK
    return bx, by, bv, status


# ---------------------------------------------------------------------------
# closed-form departure dwell solver (one-hop, unweighted objective)
# ---------------------------------------------------------------------------

def dwell_eval(c1, c2, c3, c4, c5, c6, rho, u, v):
    num = ((c1 * u + c4) * u + (c2 * v + c5) * v + c3 * u * v + c6)
    return num / (rho + u + v)


def dwell_closed_form(c1, c2, c3, c4, c5, c6, rho, Aj, Bj, A_all, A_wo_next,
                      ujB, ubar, vbar):
    """Optimal (u, v) for the departure problem with objective
    (c1 u^2 + c2 v^2 + c3 uv + c4 u + c5 v + c6) / (rho + u + v)
    over {0<=u<=ubar, v=0} U {u=ujB, 0<=v<=vbar}; returns (u, v, cost).

    Composes the closed-form optimum of each constraint class and keeps the
    cheaper one (equal costs prefer the first class).  Active class: the
    objective along v=0 crosses its zero-dwell value at the break-even time
    A_all*rho/(Bj - A_all) and decreases beyond it, so the optimum is the
    bound when the bound reaches break-even, else zero.  Idle class: the
    objective along u=ujB is convex in v with an explicit stationary point.
    """
    # active class: v = 0, u in [0, ubar]
    u1 = 0.0
    if A_all < Bj:
        usharp = A_all * rho / (Bj - A_all)
        if usharp <= ubar:
            u1 = ubar
    cost1 = dwell_eval(c1, c2, c3, c4, c5, c6, rho, u1, 0.0)
    u, v, cost = u1, 0.0, cost1
    # idle class: u = ujB, v in [0, vbar] (empty when the horizon cannot
    # even accommodate the full active time)
    if vbar >= 0.0:
        v2 = 0.0
        lhs = Bj * (1.0 - rho * rho / ((rho + ujB) * (rho + ujB)))
        if A_all < lhs:
            if A_wo_next > 0.0:
                arg = ((Bj - Aj) * (rho + ujB) * (rho + ujB)
                       - Bj * rho * rho) / A_wo_next
                if arg > 0.0:
                    vsharp = math.sqrt(arg) - (rho + ujB)
                    if vsharp < 0.0:
                        vsharp = 0.0
                else:
                    vsharp = 0.0
            else:
                vsharp = math.inf
            v2 = vsharp if vsharp <= vbar else vbar
        cost2 = dwell_eval(c1, c2, c3, c4, c5, c6, rho, ujB, v2)
        if cost2 < cost:
            u, v, cost = ujB, v2, cost2
    return u, v, cost


def dwell_two_segments(c1, c2, c3, c4, c5, c6, rho, ujB, ubar, vbar):
    """Same departure problem solved by minimizing the two boundary
    segments of its feasible set; used for weighted objectives and as a
    cross-check of the closed form.  Ties prefer the u-segment."""
    C = np.empty(9)
    C[0] = c1
    C[1] = c2
    C[2] = c3
    C[3] = c4
    C[4] = c5
    C[5] = c6
    C[6] = 1.0
    C[7] = 1.0
    C[8] = rho
    f2, f1, f0, g1, g0 = line_restrict(C, 0.0, 0.0, 1.0, 0.0)
    ru, hu = segment_min(f2, f1, f0, g1, g0, ubar)
    if vbar >= 0.0:
        f2, f1, f0, g1, g0 = line_restrict(C, ujB, 0.0, 0.0, 1.0)
        rv, hv = segment_min(f2, f1, f0, g1, g0, vbar)
        if hv < hu - 1e-15 * max(1.0, abs(hu)):
            return ujB, rv, hv
    return ru, 0.0, hu


def case_solve(Qm, cv, k0, rho_total, S, s0, P, L, Q, M, N):
    """Restrict a multivariate rational dwell objective to one constraint
    case and minimize it.

    The objective is (vars^T Qm vars + cv^T vars + k0) / (sum(vars) +
    rho_total) with vars = S z + s0 for z = (x, y) ranging over the polytope
    {0<=x<=N, 0<=y<=min(Px+L, -Qx+M)}.  Returns (x, y, value, status); the
    substitution into bivariate coefficients is exact.
    """
    n = S.shape[0]
    C = np.zeros(9)
    for a in range(n):
        sa0 = S[a, 0]
        sa1 = S[a, 1]
        for b in range(n):
            qab = Qm[a, b]
            C[0] += sa0 * qab * S[b, 0]
            C[1] += sa1 * qab * S[b, 1]
            C[2] += 2.0 * sa0 * qab * S[b, 1]
        lin_a = cv[a]
        for b in range(n):
            lin_a += 2.0 * s0[b] * Qm[b, a]
        C[3] += lin_a * sa0
        C[4] += lin_a * sa1
        C[6] += sa0
        C[7] += sa1
    c6 = k0
    for a in range(n):
        c6 += cv[a] * s0[a]
        for b in range(n):
            c6 += s0[a] * Qm[a, b] * s0[b]
    C[5] = c6
    C[8] = rho_total
    for a in range(n):
        C[8] += s0[a]
    return rfop_solve(C, P, L, Q, M, N)


_KERNELS = [
    "quad_roots", "_cubic_eval", "_cubic_gate", "_cubic_polish",
    "_cubic_bisection", "cubic_roots", "_quartic_eval", "_quartic_gate",
    "_quartic_deriv",
    "_newton_polish", "_quartic_bisection", "_dedupe_sorted", "_cbrt",
    "quartic_roots", "seg_eval", "seg_delta", "segment_min", "rational_eval",
    "line_restrict", "gradient_conics", "_conic_eval", "_conic_scale",
    "_newton2", "stationary_points", "rfop_solve", "dwell_closed_form",
    "dwell_eval", "dwell_two_segments", "case_solve",
]

if USE_NUMBA:
    from numba import njit

    for _name in _KERNELS:
        globals()[_name] = njit(cache=True)(globals()[_name])


def warmup():
    """Trigger JIT compilation of the full kernel set (no-op without numba)."""
    out = np.empty(4)
    quartic_roots(1.0, 0.0, 0.0, 0.0, -1.0, out)
    C = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
    rfop_solve(C, 1.0, 1.0, 1.0, 2.0, 2.0)
    dwell_closed_form(-4.0, 1.0, 2.0, 6.0, 3.0, 6.0, 2.0, 1.0, 10.0, 2.0, 1.0,
                      0.5, 0.5, 10.0)
    dwell_two_segments(-4.0, 1.0, 2.0, 6.0, 3.0, 6.0, 2.0, 0.5, 0.5, 10.0)
    Qm = np.eye(3)
    cv = np.ones(3)
    S = np.zeros((3, 2))
    S[0, 0] = 1.0
    S[1, 1] = 1.0
    case_solve(Qm, cv, 1.0, 2.0, S, np.zeros(3), 0.5, 1.0, 1.0, 3.0, np.inf)
