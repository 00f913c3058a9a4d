"""Pure-Python kernels: radial Dormand-Prince stepper, quintic Hermite dense
output and adaptive Gauss-Kronrod moments of the positive part.

This module is the fallback for ``_ckernels`` and must stay numerically
identical to it (same control flow, same constants).
"""
import math

import numpy as np

# Dormand-Prince 5(4)
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (9017 / 3168, -355 / 33, 46732 / 5247,
                                49 / 176, -5103 / 18656)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)

# Gauss-Kronrod 7/15
_XGK = (0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0)
_WGK = (0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714)
_WG = (0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327)

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 5.0
_MAX_PIECES = 400
_GRADE = 6
_MIN_WIDTH = 1e-13

STATUS_END = 0
STATUS_ZERO = 1
STATUS_UNDERFLOW = 2
STATUS_MAX_STEPS = 3


def _coef(coeffs, r):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + c
    return acc


def _rhs(nm1, gamma, coeffs, r, v, w):
    src = 0.0
    if v > 0.0:
        src = _coef(coeffs, r) * v ** gamma
    return -nm1 / r * w - src


def _dp_step(nm1, gamma, coeffs, r, v, w, h, f1):
    """One Dormand-Prince step; returns (v5, w5, err_v, err_w, f7)."""
    # stage derivatives of v are the w-stages, of w the rhs values
    kv1, kw1 = w, f1
    v2 = v + h * _A21 * kv1
    w2 = w + h * _A21 * kw1
    kv2, kw2 = w2, _rhs(nm1, gamma, coeffs, r + _C2 * h, v2, w2)
    v3 = v + h * (_A31 * kv1 + _A32 * kv2)
    w3 = w + h * (_A31 * kw1 + _A32 * kw2)
    kv3, kw3 = w3, _rhs(nm1, gamma, coeffs, r + _C3 * h, v3, w3)
    v4 = v + h * (_A41 * kv1 + _A42 * kv2 + _A43 * kv3)
    w4 = w + h * (_A41 * kw1 + _A42 * kw2 + _A43 * kw3)
    kv4, kw4 = w4, _rhs(nm1, gamma, coeffs, r + _C4 * h, v4, w4)
    v5 = v + h * (_A51 * kv1 + _A52 * kv2 + _A53 * kv3 + _A54 * kv4)
    w5 = w + h * (_A51 * kw1 + _A52 * kw2 + _A53 * kw3 + _A54 * kw4)
    kv5, kw5 = w5, _rhs(nm1, gamma, coeffs, r + _C5 * h, v5, w5)
    v6 = v + h * (_A61 * kv1 + _A62 * kv2 + _A63 * kv3 + _A64 * kv4 + _A65 * kv5)
    w6 = w + h * (_A61 * kw1 + _A62 * kw2 + _A63 * kw3 + _A64 * kw4 + _A65 * kw5)
    kv6, kw6 = w6, _rhs(nm1, gamma, coeffs, r + h, v6, w6)
    vn = v + h * (_B1 * kv1 + _B3 * kv3 + _B4 * kv4 + _B5 * kv5 + _B6 * kv6)
    wn = w + h * (_B1 * kw1 + _B3 * kw3 + _B4 * kw4 + _B5 * kw5 + _B6 * kw6)
    kv7, kw7 = wn, _rhs(nm1, gamma, coeffs, r + h, vn, wn)
    ev = h * (_E1 * kv1 + _E3 * kv3 + _E4 * kv4 + _E5 * kv5 + _E6 * kv6 + _E7 * kv7)
    ew = h * (_E1 * kw1 + _E3 * kw3 + _E4 * kw4 + _E5 * kw5 + _E6 * kw6 + _E7 * kw7)
    return vn, wn, ev, ew, kw7


def _cubic_root(h, v0, w0, v1, w1):
    # root in (0, h] of the cubic Hermite through (0, v0, w0), (h, v1, w1)
    lo, hi = 0.0, h
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        t = mid / h
        t2 = t * t
        t3 = t2 * t
        val = ((2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * w0
               + (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * w1)
        if val > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _graded(nm1, gamma, coeffs, r, v, w, f, hz):
    # steps to r + hz halving the remaining distance; v_+^gamma is not smooth
    # at the zero, so the last step into it must be short
    out = []
    done = 0.0
    for j in range(1, _GRADE + 1):
        target = hz * (1.0 - 0.5 ** j)
        v, w, _ev, _ew, f = _dp_step(nm1, gamma, coeffs, r + done, v, w, target - done, f)
        done = target
        out.append((r + done, v, w, f))
    v, w, _ev, _ew, f = _dp_step(nm1, gamma, coeffs, r + done, v, w, hz - done, f)
    out.append((r + hz, v, w, f))
    return out


def integrate_radial(n, gamma, coeffs, r0, v0, dv0, r_end, rtol, atol_v, atol_dv,
                     h0, past_zero, max_steps):
    """Integrate v'' + (n-1)/r v' + A(r) v_+^gamma = 0 from r0 to r_end.

    The first sign change of v is landed on exactly (a node is placed at the
    zero) so the kink of v_+^gamma never sits inside a step.

    Returns ``(r, v, dv, zero_index, status)``; ``zero_index`` is -1 when no
    zero was crossed.
    """
    nm1 = float(n - 1)
    gamma = float(gamma)
    coeffs = [float(c) for c in coeffs]
    rs, vs, ws = [r0], [v0], [dv0]
    r, v, w = r0, v0, dv0
    f = _rhs(nm1, gamma, coeffs, r, v, w)
    h = min(h0, r_end - r)
    zero_index = -1
    status = STATUS_END
    steps = 0
    while r < r_end:
        if steps >= max_steps:
            status = STATUS_MAX_STEPS
            break
        last = False
        if r + h >= r_end:
            h = r_end - r
            last = True
        if h <= 1e-15 * max(1.0, abs(r)):
            status = STATUS_UNDERFLOW
            break
        vn, wn, ev, ew, fn = _dp_step(nm1, gamma, coeffs, r, v, w, h, f)
        sv = atol_v + rtol * max(abs(v), abs(vn))
        sw = atol_dv + rtol * max(abs(w), abs(wn))
        err = max(abs(ev) / sv, abs(ew) / sw)
        steps += 1
        if err > 1.0 or not math.isfinite(err):
            fac = _FAC_MIN if not math.isfinite(err) else max(_FAC_MIN, _SAFETY * err ** -0.2)
            h *= fac
            continue
        rn = r + h
        if last:
            rn = r_end
        if zero_index < 0 and v > 0.0 and vn <= 0.0:
            hz = _cubic_root(h, v, w, vn, wn)
            for _ in range(8):
                land = _graded(nm1, gamma, coeffs, r, v, w, f, hz)
                vz, wz = land[-1][1], land[-1][2]
                if abs(vz) <= 4e-16 * (abs(v) + abs(w) * hz) or wz == 0.0:
                    break
                hz_new = hz - vz / wz
                if not (0.0 < hz_new <= h):
                    break
                hz = hz_new
            for rg, vg, wg, fg in land[:-1]:
                rs.append(rg)
                vs.append(vg)
                ws.append(wg)
            rn, vn, wn, fn = land[-1]
            last = False
            zero_index = len(rs)
        rs.append(rn)
        vs.append(vn)
        ws.append(wn)
        r, v, w, f = rn, vn, wn, fn
        if (zero_index >= 0 and past_zero > 0.0 and len(rs) - 1 > zero_index
                and r >= past_zero * rs[zero_index]):
            status = STATUS_ZERO
            break
        if last:
            break
        fac = _FAC_MAX if err == 0.0 else min(_FAC_MAX, max(_FAC_MIN, _SAFETY * err ** -0.2))
        h *= fac
    return (np.array(rs), np.array(vs), np.array(ws), zero_index, status)


def _hermite(x0, h, y0, d0, c0, y1, d1, c1, x):
    t = (x - x0) / h
    t2 = t * t
    t3 = t2 * t
    t4 = t3 * t
    t5 = t4 * t
    h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5
    h1 = t - 6 * t3 + 8 * t4 - 3 * t5
    h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5)
    g0 = 10 * t3 - 15 * t4 + 6 * t5
    g1 = -4 * t3 + 7 * t4 - 3 * t5
    g2 = 0.5 * (t3 - 2 * t4 + t5)
    dh0 = -30 * t2 + 60 * t3 - 30 * t4
    dh1 = 1 - 18 * t2 + 32 * t3 - 15 * t4
    dh2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4)
    dg1 = -12 * t2 + 28 * t3 - 15 * t4
    dg2 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4)
    val = (h0 * y0 + g0 * y1) + h * (h1 * d0 + g1 * d1) + h * h * (h2 * c0 + g2 * c1)
    der = (dh0 * (y0 - y1)) / h + (dh1 * d0 + dg1 * d1) + h * (dh2 * c0 + dg2 * c1)
    return val, der


def _locate(nodes, x):
    # index i with nodes[i] <= x <= nodes[i+1], clamped
    lo, hi = 0, len(nodes) - 1
    if x <= nodes[0]:
        return 0
    if x >= nodes[hi]:
        return hi - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if nodes[mid] <= x:
            lo = mid
        else:
            hi = mid
    return lo


def hermite_eval(nodes, v, dv, d2v, x):
    """Evaluate the quintic Hermite interpolant and its slope at points ``x``."""
    x = np.asarray(x, dtype=float)
    out_v = np.empty(x.shape)
    out_d = np.empty(x.shape)
    nodes_l = nodes.tolist()
    flat_x = x.ravel()
    fv = out_v.ravel()
    fd = out_d.ravel()
    for k in range(flat_x.size):
        xi = float(flat_x[k])
        i = _locate(nodes_l, xi)
        fv[k], fd[k] = _hermite(nodes_l[i], nodes_l[i + 1] - nodes_l[i], v[i], dv[i],
                                d2v[i], v[i + 1], dv[i + 1], d2v[i + 1], xi)
    return out_v, out_d


def _integrand(seg, p, m, x):
    val, _ = _hermite(*seg, x)
    if val <= 0.0:
        return 0.0
    if m == 0.0:
        return val ** p
    return val ** p * x ** m


def _gk15(seg, p, m, a, b):
    c = 0.5 * (a + b)
    hl = 0.5 * (b - a)
    fc = _integrand(seg, p, m, c)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    for j in range(7):
        dx = hl * _XGK[j]
        fs = _integrand(seg, p, m, c - dx) + _integrand(seg, p, m, c + dx)
        res_k += _WGK[j] * fs
        if j % 2 == 1:
            res_g += _WG[j // 2] * fs
    return res_k * hl, abs((res_k - res_g) * hl)


def _adaptive(seg, p, m, a, b, epsrel, epsabs):
    # globally adaptive: bisect the piece with the largest error estimate until
    # the summed estimate meets the tolerance of the segment total
    val, err = _gk15(seg, p, m, a, b)
    pieces = [[a, b, val, err]]
    total, total_err = val, err
    while total_err > max(epsabs, epsrel * abs(total)) and len(pieces) < _MAX_PIECES:
        k = max(range(len(pieces)), key=lambda j: pieces[j][3])
        lo, hi, val, err = pieces[k]
        if err == 0.0:
            break
        if hi - lo <= _MIN_WIDTH * max(abs(lo), abs(hi)):
            # unresolvable in double precision; keep the value, drop the estimate
            pieces[k][3] = 0.0
            total_err -= err
            continue
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(seg, p, m, lo, mid)
        v2, e2 = _gk15(seg, p, m, mid, hi)
        pieces[k] = [lo, mid, v1, e1]
        pieces.append([mid, hi, v2, e2])
        total += v1 + v2 - val
        total_err += e1 + e2 - err
    out = 0.0
    for piece in pieces:
        out += piece[2]
    return out


def power_moment(nodes, v, dv, d2v, p, m, lo, hi, epsrel, epsabs):
    """Integral of max(v, 0)**p * r**m over [lo, hi] on the Hermite interpolant.

    Each node interval is integrated by adaptive G7/K15 bisection; intervals
    where the interpolant is nonpositive at both ends are skipped (profiles
    are monotone, so they vanish identically there).
    """
    if hi <= lo:
        return 0.0
    p = float(p)
    m = float(m)
    nodes_l = nodes.tolist()
    total = 0.0
    i0 = _locate(nodes_l, lo)
    i1 = _locate(nodes_l, hi)
    span = hi - lo
    for i in range(i0, i1 + 1):
        a = max(lo, nodes_l[i])
        b = min(hi, nodes_l[i + 1])
        if b <= a:
            continue
        if v[i] <= 0.0 and v[i + 1] <= 0.0:
            continue
        seg = (nodes_l[i], nodes_l[i + 1] - nodes_l[i], float(v[i]), float(dv[i]),
               float(d2v[i]), float(v[i + 1]), float(dv[i + 1]), float(d2v[i + 1]))
        total += _adaptive(seg, p, m, a, b, epsrel, epsabs * (b - a) / span)
    return total
