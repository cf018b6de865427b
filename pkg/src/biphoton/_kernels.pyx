# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function here has a numpy twin in ``_kernels_py`` with the same
signature; ``biphoton.kernels`` picks one at import time.
"""
import numpy as np

from libc.math cimport exp, sin, cos, sqrt, M_PI


def jsa_fill(const double[::1] ws, const double[::1] wi,
             const double[::1] dp, const double[::1] dq,
             const double complex[::1] weight,
             double gamma3N, double tau):
    cdef Py_ssize_t ns = ws.shape[0], ni = wi.shape[0], nm = dp.shape[0]
    cdef Py_ssize_t j, k, m
    cdef double g = tau * tau / 8.0
    cdef double h = 0.5 * gamma3N
    cdef double u, x, den, gauss
    cdef double complex acc
    out = np.empty((ns, ni), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    for j in range(ns):
        for k in range(ni):
            acc = 0.0
            for m in range(nm):
                u = ws[j] + wi[k] + dq[m]
                x = wi[k] + dp[m]
                den = h * h + x * x
                gauss = exp(-u * u * g)
                # 1/(h - i x) = (h + i x)/(h^2 + x^2)
                acc = acc + weight[m] * gauss * (h + 1j * x) / den
            o[j, k] = acc
    return out


def quad_dft(const double complex[:, ::1] coeffs, const double[::1] nodes,
             const double[::1] points, double sign):
    """out[l, q] = sum_j coeffs[j, q] * exp(sign * 1j * nodes[j] * points[l])"""
    cdef Py_ssize_t n = coeffs.shape[0], r = coeffs.shape[1]
    cdef Py_ssize_t nt = points.shape[0]
    cdef Py_ssize_t l, j, q
    cdef double ph, c, s
    cdef double complex e
    out = np.zeros((nt, r), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    for l in range(nt):
        for j in range(n):
            ph = sign * nodes[j] * points[l]
            e = cos(ph) + 1j * sin(ph)
            for q in range(r):
                o[l, q] = o[l, q] + coeffs[j, q] * e
    return out


cdef inline double _pulse(double area, double tau, double t) nogil:
    return area / (sqrt(M_PI) * tau) * exp(-t * t / (tau * tau))


cdef inline void _rhs(double t, double complex E, double complex A,
                      double complex B, double area_a, double area_b,
                      double delta1, double delta2, double tau,
                      double complex* dE, double complex* dA,
                      double complex* dB) nogil:
    cdef double oa = _pulse(area_a, tau, t)
    cdef double ob = _pulse(area_b, tau, t)
    dE[0] = 1j * (0.5 * oa * A)
    dA[0] = 1j * (0.5 * oa * E + 0.5 * ob * B + delta1 * A)
    dB[0] = 1j * (0.5 * ob * A + delta2 * B)


def rk4_three_level(const double[::1] t, double area_a, double area_b,
                    double delta1, double delta2, double tau):
    cdef Py_ssize_t n = t.shape[0], k
    Eo = np.empty(n, dtype=np.complex128)
    Ao = np.empty(n, dtype=np.complex128)
    Bo = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ev = Eo, av = Ao, bv = Bo
    cdef double complex E = 1.0, A = 0.0, B = 0.0
    cdef double complex k1e, k1a, k1b, k2e, k2a, k2b
    cdef double complex k3e, k3a, k3b, k4e, k4a, k4b
    cdef double h, t0
    ev[0] = E
    av[0] = A
    bv[0] = B
    for k in range(n - 1):
        t0 = t[k]
        h = t[k + 1] - t0
        _rhs(t0, E, A, B, area_a, area_b, delta1, delta2, tau, &k1e, &k1a, &k1b)
        _rhs(t0 + 0.5 * h, E + 0.5 * h * k1e, A + 0.5 * h * k1a, B + 0.5 * h * k1b,
             area_a, area_b, delta1, delta2, tau, &k2e, &k2a, &k2b)
        _rhs(t0 + 0.5 * h, E + 0.5 * h * k2e, A + 0.5 * h * k2a, B + 0.5 * h * k2b,
             area_a, area_b, delta1, delta2, tau, &k3e, &k3a, &k3b)
        _rhs(t0 + h, E + h * k3e, A + h * k3a, B + h * k3b,
             area_a, area_b, delta1, delta2, tau, &k4e, &k4a, &k4b)
        E = E + h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
        A = A + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        B = B + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        ev[k + 1] = E
        av[k + 1] = A
        bv[k + 1] = B
    return Eo, Ao, Bo


cdef inline double complex _src(double bamp, double tau, double ws, double s) nogil:
    # b(s) exp(i ws s), b Gaussian with exp(-2 s^2 / tau^2)
    return bamp * exp(-2.0 * s * s / (tau * tau)) * (cos(ws * s) + 1j * sin(ws * s))


def dsi_double_integral(const double[::1] edges, const double[::1] x,
                        const double[::1] w, double bamp, double tau,
                        double gamma3N, double ws, double wi):
    """Nested Gauss-Legendre evaluation of the two-time integral.

    Returns (D, C_end) where C_end is the inner amplitude at edges[-1].
    """
    cdef Py_ssize_t npan = edges.shape[0] - 1, p = x.shape[0]
    cdef Py_ssize_t k, q, r
    cdef double gam = 0.5 * gamma3N
    cdef double a, hpan, tq, hq, s
    cdef double complex C = 0.0, D = 0.0, inner, full
    for k in range(npan):
        a = edges[k]
        hpan = edges[k + 1] - a
        for q in range(p):
            tq = a + 0.5 * hpan * (1.0 + x[q])
            hq = tq - a
            inner = 0.0
            for r in range(p):
                s = a + 0.5 * hq * (1.0 + x[r])
                inner = inner + 0.5 * hq * w[r] * exp(-gam * (tq - s)) * _src(bamp, tau, ws, s)
            inner = inner + exp(-gam * hq) * C
            D = D + 0.5 * hpan * w[q] * (cos(wi * tq) + 1j * sin(wi * tq)) * inner
        full = 0.0
        for r in range(p):
            s = a + 0.5 * hpan * (1.0 + x[r])
            full = full + 0.5 * hpan * w[r] * exp(-gam * (a + hpan - s)) * _src(bamp, tau, ws, s)
        C = exp(-gam * hpan) * C + full
    return D, C
