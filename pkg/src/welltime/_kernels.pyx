# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gaussian-packet kernels.

Same functions, signatures and integration breakpoints as ``_fallback``; the
difference is a C implementation of the adaptive Gauss-Kronrod engine and of
the integrands, which removes the Python overhead per panel.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sin, cos, sqrt, asinh, acos, fabs, hypot, pow, M_PI
from libc.stdlib cimport malloc, free

from .quadrature import AccuracyError, QuadResult

cnp.import_array()

cdef double S2P = sqrt(2.0 / M_PI)
cdef double X_TAIL = 6.5
cdef double ANGLE_CUT = 4.75
cdef double Z_EXPONENT_CUT = 22.5
cdef double EPS = 2.220446049250313e-16
cdef double UFLOW = 2.2250738585072014e-308

cdef double XGK[11]
cdef double WGK[11]
cdef double WG[5]
XGK[:] = [0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
          0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
          0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
          0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
          0.294392862701460198131126603103866, 0.148874338981631210884826001129720, 0.0]
WGK[:] = [0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
          0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
          0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
          0.123491976262065851077208626518846, 0.134709217311473325928054001771707,
          0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
          0.149445554002916905664936468389821]
WG[:] = [0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
         0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
         0.295524224714752870173892994651338]

ctypedef struct Pair:
    double re
    double im

ctypedef Pair (*integrand)(double x, double* p) noexcept nogil

cdef enum:
    OK = 0
    MAX_SUB = 1
    ROUNDOFF = 2
    BAD_VALUE = 3


cdef inline double _qp_err(double err, double resabs, double resasc) noexcept nogil:
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, pow(200.0 * err / resasc, 1.5))
    if resabs > UFLOW / (50.0 * EPS):
        err = max(50.0 * EPS * resabs, err)
    return err


cdef int _gk21(integrand f, double* p, double a, double b, Pair* out, double* err,
               double* resabs) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double ah = fabs(h)
    cdef Pair fv[21]
    cdef double w[21]
    cdef double g[21]
    cdef int j
    for j in range(10):
        fv[j] = f(c - h * XGK[j], p)
        fv[20 - j] = f(c + h * XGK[j], p)
        w[j] = WGK[j]
        w[20 - j] = WGK[j]
        g[j] = 0.0
        g[20 - j] = 0.0
    fv[10] = f(c, p)
    w[10] = WGK[10]
    g[10] = 0.0
    for j in range(5):
        g[2 * j + 1] = WG[j]
        g[19 - 2 * j] = WG[j]
    cdef double kre = 0.0, kim = 0.0, gre = 0.0, gim = 0.0
    cdef double absre = 0.0, absim = 0.0
    for j in range(21):
        kre += w[j] * fv[j].re
        kim += w[j] * fv[j].im
        gre += g[j] * fv[j].re
        gim += g[j] * fv[j].im
        absre += w[j] * fabs(fv[j].re)
        absim += w[j] * fabs(fv[j].im)
    cdef double mre = 0.5 * kre, mim = 0.5 * kim
    cdef double ascre = 0.0, ascim = 0.0
    for j in range(21):
        ascre += w[j] * fabs(fv[j].re - mre)
        ascim += w[j] * fabs(fv[j].im - mim)
    out.re = kre * h
    out.im = kim * h
    err[0] = (_qp_err(fabs((kre - gre) * h), absre * ah, ascre * ah)
              + _qp_err(fabs((kim - gim) * h), absim * ah, ascim * ah))
    resabs[0] = (absre + absim) * ah
    if not (out.re == out.re and out.im == out.im and fabs(out.re) < 1e308 and fabs(out.im) < 1e308):
        return BAD_VALUE
    return OK


cdef int _adaptive(integrand f, double* p, double* edges, int n_edges, double abs_tol,
                   double rel_tol, int max_sub, Pair* total, double* total_err,
                   int* n_evals) noexcept nogil:
    cdef int n = n_edges - 1
    cdef int cap = max_sub if max_sub > n else n
    cdef double* a = <double*> malloc(cap * sizeof(double))
    cdef double* b = <double*> malloc(cap * sizeof(double))
    cdef double* vr = <double*> malloc(cap * sizeof(double))
    cdef double* vi = <double*> malloc(cap * sizeof(double))
    cdef double* er = <double*> malloc(cap * sizeof(double))
    cdef double* ra = <double*> malloc(cap * sizeof(double))
    cdef int i, imax, status = OK
    cdef Pair r
    cdef double e, m, sre, sim, serr, sabs, tol
    n_evals[0] = 0
    for i in range(n):
        a[i] = edges[i]
        b[i] = edges[i + 1]
        if _gk21(f, p, a[i], b[i], &r, &e, &ra[i]) != OK:
            status = BAD_VALUE
        vr[i] = r.re
        vi[i] = r.im
        er[i] = e
        n_evals[0] += 21
    while status == OK:
        sre = 0.0
        sim = 0.0
        serr = 0.0
        sabs = 0.0
        imax = 0
        for i in range(n):
            sre += vr[i]
            sim += vi[i]
            serr += er[i]
            sabs += ra[i]
            if er[i] > er[imax]:
                imax = i
        # accept once the estimate is down at the rounding floor of the rule
        tol = max(abs_tol, rel_tol * hypot(sre, sim), 100.0 * EPS * sabs)
        if serr <= tol:
            break
        if n >= cap:
            status = MAX_SUB
            break
        m = 0.5 * (a[imax] + b[imax])
        if not (m > min(a[imax], b[imax]) and m < max(a[imax], b[imax])):
            status = ROUNDOFF
            break
        a[n] = m
        b[n] = b[imax]
        b[imax] = m
        if _gk21(f, p, a[imax], b[imax], &r, &e, &ra[imax]) != OK:
            status = BAD_VALUE
        vr[imax] = r.re
        vi[imax] = r.im
        er[imax] = e
        if _gk21(f, p, a[n], b[n], &r, &e, &ra[n]) != OK:
            status = BAD_VALUE
        vr[n] = r.re
        vi[n] = r.im
        er[n] = e
        n += 1
        n_evals[0] += 42
    sre = 0.0
    sim = 0.0
    serr = 0.0
    for i in range(n):
        sre += vr[i]
        sim += vi[i]
        serr += er[i]
    total.re = sre
    total.im = sim
    total_err[0] = serr
    free(a)
    free(b)
    free(vr)
    free(vi)
    free(er)
    free(ra)
    return status


# --------------------------------------------------------------------------
# integrands; p[0] = u, p[1] = v

cdef Pair _f_plus(double t, double* p) noexcept nogil:
    cdef double d = p[0] * (exp(t) - exp(-t)) * 0.5 - p[1]
    cdef Pair r
    r.re = exp(-2.0 * d * d)
    r.im = 0.0
    return r

cdef Pair _f_minus(double t, double* p) noexcept nogil:
    cdef double d = p[0] * (exp(t) - exp(-t)) * 0.5 + p[1]
    cdef Pair r
    r.re = exp(-2.0 * d * d)
    r.im = 0.0
    return r

cdef Pair _f_kappa(double th, double* p) noexcept nogil:
    cdef double c = p[0] * cos(th)
    cdef Pair r
    r.re = exp(-2.0 * c * c) * sin(4.0 * p[0] * p[1] * sin(th))
    r.im = 0.0
    return r

cdef Pair _f_z(double t, double* p) noexcept nogil:
    # 2 exp(-2(t^4 + 2 v t^2) + 4 i u t^2) / sqrt(t^2 - 2 i u), principal root
    cdef double u = p[0], v = p[1]
    cdef double t2 = t * t
    cdef double mag = 2.0 * exp(-2.0 * (t2 * t2 + 2.0 * v * t2))
    cdef double ph = 4.0 * u * t2
    cdef double xr = t2, xi = -2.0 * u
    cdef double modx = hypot(xr, xi)
    cdef double sr = sqrt(0.5 * (modx + xr))
    cdef double si = sqrt(0.5 * (modx - xr))
    if xi < 0:
        si = -si
    cdef double nr = mag * cos(ph), ni = mag * sin(ph)
    cdef double den = sr * sr + si * si
    cdef Pair r
    r.re = (nr * sr + ni * si) / den
    r.im = (ni * sr - nr * si) / den
    return r

cdef Pair _f_gamma(double s, double* p) noexcept nogil:
    cdef double x = p[0] * (exp(s) - exp(-s)) * 0.5
    cdef Pair r
    r.re = exp(-2.0 * (x * x + 2.0 * p[1] * x))
    r.im = 0.0
    return r


# --------------------------------------------------------------------------
# breakpoint layout, shared with the fallback

cdef int _add_point(double* buf, int n, double x, double lo, double hi) noexcept nogil:
    cdef int i
    if not (x > lo and x < hi):
        return n
    for i in range(n):
        if buf[i] == x:
            return n
    buf[n] = x
    return n + 1

cdef void _sort(double* buf, int n) noexcept nogil:
    cdef int i, j
    cdef double t
    for i in range(1, n):
        t = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > t:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = t


cdef int _run(int which, double u, double v, double abs_tol, double rel_tol, int max_sub,
              Pair* val, double* err, int* n_evals) noexcept nogil:
    cdef double edges[210]
    cdef double p[2]
    cdef double lo = 0.0, hi, pref = 1.0, x_max, d
    cdef int n = 0, k, n_osc, status
    cdef integrand f
    cdef double ds[5]
    p[0] = u
    p[1] = v
    if which == 0:
        pref = v * S2P
        hi = asinh((v + X_TAIL) / u)
        ds[0] = -3.0; ds[1] = -1.0; ds[2] = 0.0; ds[3] = 1.0; ds[4] = 3.0
        for k in range(5):
            n = _add_point(edges, n, asinh(max(v + ds[k], 0.0) / u), lo, hi)
        f = _f_plus
    elif which == 1:
        pref = v * S2P
        hi = asinh(X_TAIL / u)
        n = _add_point(edges, n, asinh(0.5 / u), lo, hi)
        n = _add_point(edges, n, asinh(2.0 / u), lo, hi)
        f = _f_minus
    elif which == 2:
        pref = 2.0 * v * S2P
        hi = 0.5 * M_PI
        if u > ANGLE_CUT:
            lo = acos(ANGLE_CUT / u)
        n_osc = <int> (4.0 * u * v * (1.0 - sin(lo)) / M_PI) + 1
        if n_osc > 200:
            n_osc = 200
        for k in range(1, n_osc):
            n = _add_point(edges, n, lo + (hi - lo) * k / n_osc, lo, hi)
        f = _f_kappa
    elif which == 3:
        x_max = -v + sqrt(v * v + Z_EXPONENT_CUT)
        hi = sqrt(x_max)
        n_osc = <int> (4.0 * u * x_max / M_PI) + 1
        if n_osc > 200:
            n_osc = 200
        for k in range(1, n_osc):
            n = _add_point(edges, n, sqrt(x_max * k / n_osc), lo, hi)
        f = _f_z
    else:
        x_max = -v + sqrt(v * v + Z_EXPONENT_CUT)
        hi = asinh(x_max / u)
        n = _add_point(edges, n, asinh(0.25 * x_max / u), lo, hi)
        f = _f_gamma
    _sort(edges, n)
    for k in range(n, 0, -1):
        edges[k] = edges[k - 1]
    edges[0] = lo
    edges[n + 1] = hi
    status = _adaptive(f, p, edges, n + 2, abs_tol / pref, rel_tol, max_sub, val, err, n_evals)
    val.re *= pref
    val.im *= pref
    err[0] *= fabs(pref)
    if which == 1:
        val.re = -val.re
    if which == 3:
        # multiply by i e^{4iuv}
        d = val.re
        val.re = -(cos(4 * u * v) * val.im + sin(4 * u * v) * d)
        val.im = cos(4 * u * v) * d - sin(4 * u * v) * val.im
    return status


_NAMES = {"r_plus": 0, "r_minus": 1, "r_kappa_mantissa": 2, "deep_z": 3, "deep_gamma": 4}
_MESSAGES = {MAX_SUB: "no convergence within the subdivision limit",
             ROUNDOFF: "round-off limits the attainable accuracy",
             BAD_VALUE: "integrand produced non-finite values"}


def _scalar(int which, double u, double v, double abs_tol, double rel_tol, int max_sub, str label):
    cdef Pair val
    cdef double err
    cdef int nev, status
    with nogil:
        status = _run(which, u, v, abs_tol, rel_tol, max_sub, &val, &err, &nev)
    value = complex(val.re, val.im) if which == 3 else val.re
    if status != OK:
        raise AccuracyError("%s (u=%g, v=%g)" % (_MESSAGES[status], u, v),
                            QuadResult(value, err, nev), label)
    return value, err


def r_plus(double u, double v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    return _scalar(0, u, v, abs_tol, rel_tol, max_sub, "r_plus")


def r_minus(double u, double v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    return _scalar(1, u, v, abs_tol, rel_tol, max_sub, "r_minus")


def r_kappa_mantissa(double u, double v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    return _scalar(2, u, v, abs_tol, rel_tol, max_sub, "r_kappa")


def deep_z(double u, double v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    return _scalar(3, u, v, abs_tol, rel_tol, max_sub, "z")


def deep_gamma(double u, double v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    return _scalar(4, u, v, abs_tol, rel_tol, max_sub, "gamma")


def batch(str name, u, v, double abs_tol=1e-13, double rel_tol=1e-12, int max_sub=2000):
    """Evaluate the named kernel on broadcast arrays of u and v without the GIL."""
    cdef int which = _NAMES[name]
    ub, vb = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    shape = ub.shape
    cdef double[::1] uu = np.ascontiguousarray(ub).ravel()
    cdef double[::1] vv = np.ascontiguousarray(vb).ravel()
    cdef Py_ssize_t npts = uu.shape[0], i
    cdef double[::1] re = np.empty(npts)
    cdef double[::1] im = np.empty(npts)
    cdef double[::1] er = np.empty(npts)
    cdef int[::1] st = np.empty(npts, dtype=np.intc)
    cdef Pair val
    cdef double e
    cdef int nev
    with nogil:
        for i in range(npts):
            st[i] = _run(which, uu[i], vv[i], abs_tol, rel_tol, max_sub, &val, &e, &nev)
            re[i] = val.re
            im[i] = val.im
            er[i] = e
    status = np.asarray(st)
    if np.any(status != OK):
        j = int(np.flatnonzero(status != OK)[0])
        raise AccuracyError("%s (u=%g, v=%g)" % (_MESSAGES[int(status[j])], uu[j], vv[j]),
                            None, name)
    if which == 3:
        vals = (np.asarray(re) + 1j * np.asarray(im)).reshape(shape)
    else:
        vals = np.asarray(re).reshape(shape)
    return vals, np.asarray(er).reshape(shape)
