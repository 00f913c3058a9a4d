# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirror of ``_pykernels`` (same control flow and constants)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, isfinite, fmax, fmin

cnp.import_array()

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double[8] XGK = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                      0.207784955007898467600689403773245, 0.0]
cdef double[8] WGK = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                      0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
cdef double[4] WG = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327]

cdef double SAFETY = 0.9
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 5.0
cdef double MIN_WIDTH = 1e-13
cdef enum:
    GRADE = 6
    MAX_PIECES = 400

STATUS_END = 0
STATUS_ZERO = 1
STATUS_UNDERFLOW = 2
STATUS_MAX_STEPS = 3


cdef struct Problem:
    double nm1
    double gamma
    double* coeffs
    int ncoef


cdef inline double coef(Problem* P, double r) nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(P.ncoef - 1, -1, -1):
        acc = acc * r + P.coeffs[i]
    return acc


cdef inline double rhs(Problem* P, double r, double v, double w) nogil:
    cdef double src = 0.0
    if v > 0.0:
        src = coef(P, r) * pow(v, P.gamma)
    return -P.nm1 / r * w - src


cdef void dp_step(Problem* P, double r, double v, double w, double h, double f1,
                  double* out) nogil:
    cdef double kv1 = w, kw1 = f1
    cdef double v2 = v + h * A21 * kv1
    cdef double w2 = w + h * A21 * kw1
    cdef double kv2 = w2, kw2 = rhs(P, r + C2 * h, v2, w2)
    cdef double v3 = v + h * (A31 * kv1 + A32 * kv2)
    cdef double w3 = w + h * (A31 * kw1 + A32 * kw2)
    cdef double kv3 = w3, kw3 = rhs(P, r + C3 * h, v3, w3)
    cdef double v4 = v + h * (A41 * kv1 + A42 * kv2 + A43 * kv3)
    cdef double w4 = w + h * (A41 * kw1 + A42 * kw2 + A43 * kw3)
    cdef double kv4 = w4, kw4 = rhs(P, r + C4 * h, v4, w4)
    cdef double v5 = v + h * (A51 * kv1 + A52 * kv2 + A53 * kv3 + A54 * kv4)
    cdef double w5 = w + h * (A51 * kw1 + A52 * kw2 + A53 * kw3 + A54 * kw4)
    cdef double kv5 = w5, kw5 = rhs(P, r + C5 * h, v5, w5)
    cdef double v6 = v + h * (A61 * kv1 + A62 * kv2 + A63 * kv3 + A64 * kv4 + A65 * kv5)
    cdef double w6 = w + h * (A61 * kw1 + A62 * kw2 + A63 * kw3 + A64 * kw4 + A65 * kw5)
    cdef double kv6 = w6, kw6 = rhs(P, r + h, v6, w6)
    cdef double vn = v + h * (B1 * kv1 + B3 * kv3 + B4 * kv4 + B5 * kv5 + B6 * kv6)
    cdef double wn = w + h * (B1 * kw1 + B3 * kw3 + B4 * kw4 + B5 * kw5 + B6 * kw6)
    cdef double kv7 = wn, kw7 = rhs(P, r + h, vn, wn)
    out[0] = vn
    out[1] = wn
    out[2] = h * (E1 * kv1 + E3 * kv3 + E4 * kv4 + E5 * kv5 + E6 * kv6 + E7 * kv7)
    out[3] = h * (E1 * kw1 + E3 * kw3 + E4 * kw4 + E5 * kw5 + E6 * kw6 + E7 * kw7)
    out[4] = kw7


cdef double cubic_root(double h, double v0, double w0, double v1, double w1) nogil:
    cdef double lo = 0.0, hi = h, mid, t, t2, t3, val
    cdef int it
    for it in range(200):
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


cdef void graded(Problem* P, double r, double v, double w, double f, double hz,
                 double[][4] out) nogil:
    # steps to r + hz halving the remaining distance; v_+^gamma is not smooth
    # at the zero, so the last step into it must be short
    cdef double done = 0.0, target, scale = 1.0
    cdef double[5] o
    cdef int j
    for j in range(GRADE):
        scale *= 0.5
        target = hz * (1.0 - scale)
        dp_step(P, r + done, v, w, target - done, f, o)
        v = o[0]
        w = o[1]
        f = o[4]
        done = target
        out[j][0] = r + done
        out[j][1] = v
        out[j][2] = w
        out[j][3] = f
    dp_step(P, r + done, v, w, hz - done, f, o)
    out[GRADE][0] = r + hz
    out[GRADE][1] = o[0]
    out[GRADE][2] = o[1]
    out[GRADE][3] = o[4]


def integrate_radial(int n, double gamma, coeffs, double r0, double v0, double dv0,
                     double r_end, double rtol, double atol_v, double atol_dv,
                     double h0, double past_zero, long max_steps):
    cdef cnp.ndarray[double, ndim=1] cf = np.ascontiguousarray(coeffs, dtype=float)
    cdef Problem P
    P.nm1 = n - 1.0
    P.gamma = gamma
    P.coeffs = &cf[0]
    P.ncoef = cf.shape[0]
    cdef long cap = 256, count = 1
    cdef cnp.ndarray[double, ndim=1] rs = np.empty(cap)
    cdef cnp.ndarray[double, ndim=1] vs = np.empty(cap)
    cdef cnp.ndarray[double, ndim=1] ws = np.empty(cap)
    rs[0] = r0
    vs[0] = v0
    ws[0] = dv0
    cdef double r = r0, v = v0, w = dv0
    cdef double f = rhs(&P, r, v, w)
    cdef double h = fmin(h0, r_end - r)
    cdef long zero_index = -1, steps = 0
    cdef int status = 0, it
    cdef bint last
    cdef double[5] o
    cdef double[GRADE + 1][4] land
    cdef double vn, wn, fn, rn, sv, sw, err, fac, hz, hz_new
    while r < r_end:
        if steps >= max_steps:
            status = 3
            break
        last = False
        if r + h >= r_end:
            h = r_end - r
            last = True
        if h <= 1e-15 * fmax(1.0, fabs(r)):
            status = 2
            break
        dp_step(&P, r, v, w, h, f, o)
        vn = o[0]
        wn = o[1]
        fn = o[4]
        sv = atol_v + rtol * fmax(fabs(v), fabs(vn))
        sw = atol_dv + rtol * fmax(fabs(w), fabs(wn))
        err = fmax(fabs(o[2]) / sv, fabs(o[3]) / sw)
        steps += 1
        if err > 1.0 or not isfinite(err):
            if not isfinite(err):
                fac = FAC_MIN
            else:
                fac = fmax(FAC_MIN, SAFETY * pow(err, -0.2))
            h *= fac
            continue
        rn = r + h
        if last:
            rn = r_end
        if zero_index < 0 and v > 0.0 and vn <= 0.0:
            hz = cubic_root(h, v, w, vn, wn)
            for it in range(8):
                graded(&P, r, v, w, f, hz, land)
                if (fabs(land[GRADE][1]) <= 4e-16 * (fabs(v) + fabs(w) * hz)
                        or land[GRADE][2] == 0.0):
                    break
                hz_new = hz - land[GRADE][1] / land[GRADE][2]
                if not (0.0 < hz_new <= h):
                    break
                hz = hz_new
            if count + GRADE + 1 >= cap:
                cap = 2 * cap + GRADE
                rs = np.resize(rs, cap)
                vs = np.resize(vs, cap)
                ws = np.resize(ws, cap)
            for it in range(GRADE):
                rs[count] = land[it][0]
                vs[count] = land[it][1]
                ws[count] = land[it][2]
                count += 1
            rn = land[GRADE][0]
            vn = land[GRADE][1]
            wn = land[GRADE][2]
            fn = land[GRADE][3]
            last = False
            zero_index = count
        if count == cap:
            cap *= 2
            rs = np.resize(rs, cap)
            vs = np.resize(vs, cap)
            ws = np.resize(ws, cap)
        rs[count] = rn
        vs[count] = vn
        ws[count] = wn
        count += 1
        r = rn
        v = vn
        w = wn
        f = fn
        if (zero_index >= 0 and past_zero > 0.0 and count - 1 > zero_index
                and r >= past_zero * rs[zero_index]):
            status = 1
            break
        if last:
            break
        if err == 0.0:
            fac = FAC_MAX
        else:
            fac = fmin(FAC_MAX, fmax(FAC_MIN, SAFETY * pow(err, -0.2)))
        h *= fac
    return rs[:count].copy(), vs[:count].copy(), ws[:count].copy(), zero_index, status


cdef inline void hermite(double x0, double h, double y0, double d0, double c0,
                         double y1, double d1, double c1, double x,
                         double* val, double* der) nogil:
    cdef double t = (x - x0) / h
    cdef double t2 = t * t
    cdef double t3 = t2 * t
    cdef double t4 = t3 * t
    cdef double t5 = t4 * t
    cdef double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5
    cdef double h1 = t - 6 * t3 + 8 * t4 - 3 * t5
    cdef double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5)
    cdef double g0 = 10 * t3 - 15 * t4 + 6 * t5
    cdef double g1 = -4 * t3 + 7 * t4 - 3 * t5
    cdef double g2 = 0.5 * (t3 - 2 * t4 + t5)
    cdef double dh0 = -30 * t2 + 60 * t3 - 30 * t4
    cdef double dh1 = 1 - 18 * t2 + 32 * t3 - 15 * t4
    cdef double dh2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4)
    cdef double dg1 = -12 * t2 + 28 * t3 - 15 * t4
    cdef double dg2 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4)
    val[0] = (h0 * y0 + g0 * y1) + h * (h1 * d0 + g1 * d1) + h * h * (h2 * c0 + g2 * c1)
    der[0] = (dh0 * (y0 - y1)) / h + (dh1 * d0 + dg1 * d1) + h * (dh2 * c0 + dg2 * c1)


cdef inline long locate(double* nodes, long size, double x) nogil:
    cdef long lo = 0, hi = size - 1, mid
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
    cdef cnp.ndarray[double, ndim=1] nd = np.ascontiguousarray(nodes, dtype=float)
    cdef cnp.ndarray[double, ndim=1] y = np.ascontiguousarray(v, dtype=float)
    cdef cnp.ndarray[double, ndim=1] d = np.ascontiguousarray(dv, dtype=float)
    cdef cnp.ndarray[double, ndim=1] c = np.ascontiguousarray(d2v, dtype=float)
    xa = np.asarray(x, dtype=float)
    cdef cnp.ndarray[double, ndim=1] xf = np.ascontiguousarray(xa.ravel())
    cdef long m = xf.shape[0], size = nd.shape[0], k, i
    cdef cnp.ndarray[double, ndim=1] ov = np.empty(m)
    cdef cnp.ndarray[double, ndim=1] od = np.empty(m)
    cdef double a, b
    for k in range(m):
        i = locate(&nd[0], size, xf[k])
        hermite(nd[i], nd[i + 1] - nd[i], y[i], d[i], c[i], y[i + 1], d[i + 1], c[i + 1],
                xf[k], &a, &b)
        ov[k] = a
        od[k] = b
    return ov.reshape(xa.shape), od.reshape(xa.shape)


cdef struct Seg:
    double x0, h, y0, d0, c0, y1, d1, c1, p, m


cdef inline double integrand(Seg* s, double x) nogil:
    cdef double val, der
    hermite(s.x0, s.h, s.y0, s.d0, s.c0, s.y1, s.d1, s.c1, x, &val, &der)
    if val <= 0.0:
        return 0.0
    if s.m == 0.0:
        return pow(val, s.p)
    return pow(val, s.p) * pow(x, s.m)


cdef void gk15(Seg* s, double a, double b, double* res, double* err) nogil:
    cdef double c = 0.5 * (a + b)
    cdef double hl = 0.5 * (b - a)
    cdef double fc = integrand(s, c)
    cdef double res_k = fc * WGK[7]
    cdef double res_g = fc * WG[3]
    cdef double dx, fs
    cdef int j
    for j in range(7):
        dx = hl * XGK[j]
        fs = integrand(s, c - dx) + integrand(s, c + dx)
        res_k += WGK[j] * fs
        if j % 2 == 1:
            res_g += WG[j // 2] * fs
    res[0] = res_k * hl
    err[0] = fabs((res_k - res_g) * hl)


cdef double adaptive(Seg* s, double a, double b, double epsrel, double epsabs) nogil:
    # globally adaptive: bisect the piece with the largest error estimate until
    # the summed estimate meets the tolerance of the segment total
    cdef double[MAX_PIECES] plo
    cdef double[MAX_PIECES] phi
    cdef double[MAX_PIECES] pval
    cdef double[MAX_PIECES] perr
    cdef int count = 1, j, k
    cdef double val, err, lo, hi, mid, v1, e1, v2, e2, total, total_err, out
    gk15(s, a, b, &val, &err)
    plo[0] = a
    phi[0] = b
    pval[0] = val
    perr[0] = err
    total = val
    total_err = err
    while total_err > fmax(epsabs, epsrel * fabs(total)) and count < MAX_PIECES:
        k = 0
        for j in range(1, count):
            if perr[j] > perr[k]:
                k = j
        lo = plo[k]
        hi = phi[k]
        val = pval[k]
        err = perr[k]
        if err == 0.0:
            break
        if hi - lo <= MIN_WIDTH * fmax(fabs(lo), fabs(hi)):
            # unresolvable in double precision; keep the value, drop the estimate
            perr[k] = 0.0
            total_err -= err
            continue
        mid = 0.5 * (lo + hi)
        gk15(s, lo, mid, &v1, &e1)
        gk15(s, mid, hi, &v2, &e2)
        phi[k] = mid
        pval[k] = v1
        perr[k] = e1
        plo[count] = mid
        phi[count] = hi
        pval[count] = v2
        perr[count] = e2
        count += 1
        total += v1 + v2 - val
        total_err += e1 + e2 - err
    out = 0.0
    for j in range(count):
        out += pval[j]
    return out


def power_moment(nodes, v, dv, d2v, double p, double m, double lo, double hi,
                 double epsrel, double epsabs):
    if hi <= lo:
        return 0.0
    cdef cnp.ndarray[double, ndim=1] nd = np.ascontiguousarray(nodes, dtype=float)
    cdef cnp.ndarray[double, ndim=1] y = np.ascontiguousarray(v, dtype=float)
    cdef cnp.ndarray[double, ndim=1] d = np.ascontiguousarray(dv, dtype=float)
    cdef cnp.ndarray[double, ndim=1] c = np.ascontiguousarray(d2v, dtype=float)
    cdef long size = nd.shape[0]
    cdef long i0 = locate(&nd[0], size, lo)
    cdef long i1 = locate(&nd[0], size, hi)
    cdef double span = hi - lo, total = 0.0, a, b
    cdef long i
    cdef Seg s
    s.p = p
    s.m = m
    for i in range(i0, i1 + 1):
        a = fmax(lo, nd[i])
        b = fmin(hi, nd[i + 1])
        if b <= a:
            continue
        if y[i] <= 0.0 and y[i + 1] <= 0.0:
            continue
        s.x0 = nd[i]
        s.h = nd[i + 1] - nd[i]
        s.y0 = y[i]
        s.d0 = d[i]
        s.c0 = c[i]
        s.y1 = y[i + 1]
        s.d1 = d[i + 1]
        s.c1 = c[i + 1]
        total += adaptive(&s, a, b, epsrel, epsabs * (b - a) / span)
    return total
