"""Time-domain view of Schmidt mode functions.

Convention: m(t) = (2π)^(-1/2) ∫ ψ(ω) exp(-iωt) dω. On a uniform grid with
spacing Δω the discrete sum is periodic in t with period 2π/Δω, so the
time window is at most one such period. The transform acts on
``sqrt(w * Δω) * ψ`` (trapezoid weights with the endpoint halving taken
as a square root), which makes the discrete map exactly unitary over one
full period sampled at ``n_t >= n`` points.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import NoOscillationFound, NyquistViolated


@dataclass(frozen=True)
class TimeModes:
    times: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)  # (n_t, r)
    dt: float
    side: str = ""

    @property
    def n_modes(self):
        return self.modes.shape[1]

    def density(self, k):
        return np.abs(self.modes[:, k]) ** 2

    def norms(self):
        return self.dt * np.sum(np.abs(self.modes) ** 2, axis=0)


def alias_period(grid):
    return 2.0 * math.pi / grid.spacing


def default_n_t(grid, duration=None):
    """At least 8 samples per 2π/(grid span), and never fewer than the node count."""
    duration = alias_period(grid) if duration is None else duration
    span = grid.hi - grid.lo
    need = max(8.0 * span * duration / (2.0 * math.pi), grid.n * duration / alias_period(grid))
    return int(2 ** math.ceil(math.log2(need)))


def _coefficients(modes, grid):
    if not grid.is_uniform:
        raise ValueError("time transforms need a uniform frequency grid")
    modes = np.asarray(modes, dtype=complex)
    if modes.ndim == 1:
        modes = modes[:, None]
    if modes.shape[0] != grid.n:
        raise ValueError(f"modes have {modes.shape[0]} samples, grid has {grid.n}")
    return modes, np.sqrt(grid.weights * grid.spacing)


def to_time(modes, grid, t_start=-0.5, duration=None, n_t=None, side=""):
    """Fourier transform frequency modes (columns) to the time domain."""
    modes, sq = _coefficients(modes, grid)
    period = alias_period(grid)
    if duration is None:
        duration = period
    if duration <= 0 or duration > period * (1.0 + 1e-12):
        raise NyquistViolated(
            f"time window {duration:.6g} exceeds the alias period 2π/Δω = {period:.6g}")
    if n_t is None:
        n_t = default_n_t(grid, duration)
    if n_t < math.ceil(grid.n * duration / period - 1e-9):
        raise NyquistViolated(
            f"n_t={n_t} undersamples the band; need at least {math.ceil(grid.n * duration / period)}")
    dt = duration / n_t
    times = t_start + dt * np.arange(n_t)
    coeffs = np.ascontiguousarray(sq[:, None] * modes / math.sqrt(2.0 * math.pi))
    out = kernels.quad_dft(coeffs, np.ascontiguousarray(grid.nodes, dtype=float), times, -1.0)
    return TimeModes(times, out, dt, side)


def to_frequency(tm: TimeModes, grid):
    """Inverse of :func:`to_time` on the same uniform grid."""
    _, sq = _coefficients(np.zeros(grid.n), grid)
    a = kernels.quad_dft(np.ascontiguousarray(tm.modes), np.ascontiguousarray(tm.times),
                         np.ascontiguousarray(grid.nodes, dtype=float), 1.0)
    a *= tm.dt * grid.spacing / (2.0 * math.pi)
    return a * math.sqrt(2.0 * math.pi) / sq[:, None]


def dominant_period(tm: TimeModes, k=0, rel_threshold=1e-2):
    """Period of the strongest oscillation in the density of mode ``k``.

    Looks for local maxima of the density's discrete spectrum away from
    zero frequency, keeps those above ``rel_threshold`` of the DC value and
    at least four periods inside the window, and refines the strongest by
    parabolic interpolation.
    """
    rho = tm.density(k)
    F = np.abs(np.fft.rfft(rho))
    n_t = rho.size
    dnu = 2.0 * math.pi / (n_t * tm.dt)
    best = None
    for i in range(4, F.size - 1):
        if F[i] > F[i - 1] and F[i] >= F[i + 1] and F[i] > rel_threshold * F[0]:
            if best is None or F[i] > F[best]:
                best = i
    if best is None:
        raise NoOscillationFound(f"mode {k} density has no oscillation above {rel_threshold:g} of its mean")
    a, b, c = F[best - 1], F[best], F[best + 1]
    denom = a - 2.0 * b + c
    delta = 0.5 * (a - c) / denom if denom != 0 else 0.0
    return 2.0 * math.pi / ((best + delta) * dnu)


def tail_decay_rate(tm: TimeModes, k=0, upper=1e-2, lower=1e-8):
    """Exponential rate of the density tail after its peak.

    Fits log density against t over samples between ``lower`` and ``upper``
    times the peak value.
    """
    rho = tm.density(k)
    ipk = int(np.argmax(rho))
    t = tm.times[ipk:]
    r = rho[ipk:] / rho[ipk]
    sel = (r < upper) & (r > lower)
    if np.count_nonzero(sel) < 3:
        raise NoOscillationFound("density tail is too short to fit")
    slope, _ = np.polyfit(t[sel], np.log(r[sel]), 1)
    return float(-slope)
