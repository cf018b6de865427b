"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def jsa_fill(ws, wi, dp, dq, weight, gamma3N, tau):
    S = ws[:, None]
    I = wi[None, :]
    out = np.zeros((ws.size, wi.size), dtype=np.complex128)
    g = tau * tau / 8.0
    for m in range(dp.size):
        out += weight[m] * np.exp(-((S + I + dq[m]) ** 2) * g) / (0.5 * gamma3N - 1j * (I + dp[m]))
    return out


def quad_dft(coeffs, nodes, points, sign, chunk=512):
    out = np.empty((points.size, coeffs.shape[1]), dtype=np.complex128)
    for start in range(0, points.size, chunk):
        p = points[start:start + chunk]
        out[start:start + chunk] = np.exp(sign * 1j * np.outer(p, nodes)) @ coeffs
    return out


def _pulse(area, tau, t):
    return area / (np.sqrt(np.pi) * tau) * np.exp(-t * t / (tau * tau))


def rk4_three_level(t, area_a, area_b, delta1, delta2, tau):
    n = t.size
    y = np.zeros((n, 3), dtype=np.complex128)
    y[0, 0] = 1.0

    def rhs(tt, v):
        oa = _pulse(area_a, tau, tt)
        ob = _pulse(area_b, tau, tt)
        E, A, B = v
        return 1j * np.array([0.5 * oa * A,
                              0.5 * oa * E + 0.5 * ob * B + delta1 * A,
                              0.5 * ob * A + delta2 * B])

    v = y[0].copy()
    for k in range(n - 1):
        h = t[k + 1] - t[k]
        k1 = rhs(t[k], v)
        k2 = rhs(t[k] + 0.5 * h, v + 0.5 * h * k1)
        k3 = rhs(t[k] + 0.5 * h, v + 0.5 * h * k2)
        k4 = rhs(t[k] + h, v + h * k3)
        v = v + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        y[k + 1] = v
    return y[:, 0].copy(), y[:, 1].copy(), y[:, 2].copy()


def dsi_double_integral(edges, x, w, bamp, tau, gamma3N, ws, wi):
    gam = 0.5 * gamma3N

    def src(s):
        return bamp * np.exp(-2.0 * s * s / (tau * tau)) * np.exp(1j * ws * s)

    a = edges[:-1]
    hp = np.diff(edges)
    tq = a[:, None] + 0.5 * hp[:, None] * (1.0 + x[None, :])
    hq = tq - a[:, None]
    s = a[:, None, None] + 0.5 * hq[:, :, None] * (1.0 + x[None, None, :])
    inner = np.sum(0.5 * hq[:, :, None] * w * np.exp(-gam * (tq[:, :, None] - s)) * src(s), axis=2)
    sf = a[:, None] + 0.5 * hp[:, None] * (1.0 + x[None, :])
    full = np.sum(0.5 * hp[:, None] * w * np.exp(-gam * ((a + hp)[:, None] - sf)) * src(sf), axis=1)

    decay = np.exp(-gam * hp)
    C = np.zeros(a.size + 1, dtype=np.complex128)
    for k in range(a.size):
        C[k + 1] = decay[k] * C[k] + full[k]

    amp = inner + np.exp(-gam * hq) * C[:-1, None]
    D = np.sum(0.5 * hp[:, None] * w * np.exp(1j * wi * tq) * amp)
    return complex(D), complex(C[-1])
