"""Time-domain reference for the closed-form pair amplitude.

Two independent computations live here. :func:`integrate_amplitudes`
steps the ground / intermediate / upper amplitudes of one collective
mode under Gaussian drives, which checks the adiabatic solution for the
upper-state amplitude. :func:`dsi_numeric` evaluates the two-time
integral for the pair amplitude by nested Gauss-Legendre quadrature and
is compared against ``generation_amplitude * eval_single``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import ConfigError, StepTooCoarse, WindowTooShort
from .spectral import eval_single

ADIABATIC_RATIO = 50.0
DRIFT_PER_TIME = 1e-6


@dataclass(frozen=True)
class DriveParams:
    omega_a_area: float = 0.1
    omega_b_area: float = 0.1
    delta1: float = 200.0
    delta2: float = 200.0
    tau: float = 0.25

    def __post_init__(self):
        for name in ("omega_a_area", "omega_b_area", "delta1", "delta2", "tau"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite number, got {v!r}")
        if self.tau <= 0:
            raise ConfigError("tau must be positive")
        if self.delta1 == 0 or self.delta2 == 0:
            raise ConfigError("detunings must be nonzero")

    @property
    def adiabatic_ok(self):
        if self.omega_a_area == 0:
            return True
        return abs(self.delta1) * self.tau * math.sqrt(math.pi) / abs(self.omega_a_area) >= ADIABATIC_RATIO

    def rabi_a(self, t):
        return self.omega_a_area / (math.sqrt(math.pi) * self.tau) * np.exp(-np.asarray(t) ** 2 / self.tau ** 2)

    def rabi_b(self, t):
        return self.omega_b_area / (math.sqrt(math.pi) * self.tau) * np.exp(-np.asarray(t) ** 2 / self.tau ** 2)

    def adiabatic_upper(self, t):
        """Adiabatically eliminated upper-state amplitude Ωa Ωb / (4 Δ1 Δ2)."""
        return self.rabi_a(t) * self.rabi_b(t) / (4.0 * self.delta1 * self.delta2)


@dataclass(frozen=True)
class AmplitudeTrajectory:
    times: np.ndarray = field(repr=False)
    E: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    drive: DriveParams = None

    def norm2(self):
        return np.abs(self.E) ** 2 + np.abs(self.A) ** 2 + np.abs(self.B) ** 2

    def adiabatic_deviation(self):
        """max|B - B_adiabatic| / max|B|."""
        ref = self.drive.adiabatic_upper(self.times)
        peak = np.max(np.abs(self.B))
        if peak == 0:
            return 0.0
        return float(np.max(np.abs(self.B - ref)) / peak)


def integrate_amplitudes(drive: DriveParams, t_span=None, dt=1e-3):
    """Fixed-step RK4 for the three coupled amplitude equations.

    Starts from the ground state at ``t_span[0]``; spontaneous emission is
    not part of this reduced model, so the total norm is conserved.
    """
    if t_span is None:
        t_span = (-6.0 * drive.tau, 6.0 * drive.tau)
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ConfigError("t_span must be increasing")
    scale = min(drive.tau, 1.0 / max(abs(drive.delta1), abs(drive.delta2)))
    if dt > 0.5 * scale:
        raise StepTooCoarse(f"dt={dt:g} does not resolve the time scale {scale:.3g}")
    n = int(math.ceil((t1 - t0) / dt)) + 1
    t = np.linspace(t0, t1, n)
    E, A, B = kernels.rk4_three_level(t, float(drive.omega_a_area), float(drive.omega_b_area),
                                      float(drive.delta1), float(drive.delta2), float(drive.tau))
    traj = AmplitudeTrajectory(t, E, A, B, drive)
    drift = float(np.max(np.abs(traj.norm2() - 1.0)))
    if drift > DRIFT_PER_TIME * (t1 - t0):
        raise StepTooCoarse(f"norm drift {drift:.3g} over {t1 - t0:g} time units; reduce dt")
    return traj


def generation_amplitude(drive: DriveParams):
    """Scalar prefactor multiplying the spectral function (couplings and
    phase-matching sum set to one)."""
    return (drive.omega_a_area * drive.omega_b_area
            / (4.0 * drive.delta1 * drive.delta2 * math.sqrt(2.0 * math.pi) * drive.tau))


def closed_form_dsi(params, drive, dws, dwi):
    return generation_amplitude(drive) * eval_single(params, dws, dwi)


def default_t_final(params, tol=1e-10):
    return 2.0 * math.log(1.0 / tol) / params.gamma3N


def dsi_numeric(params, drive: DriveParams, dws, dwi, t_start=None, t_final=None,
                panel=None, order=8):
    """Pair amplitude from the two-time integral, evaluated numerically.

    The inner integral runs the source b(t'') exp(i dws t'') into the
    decaying intermediate amplitude, the outer one projects it on
    exp(i dwi t'). Beyond ``t_final`` the source is zero and the remaining
    exponential is integrated exactly.
    """
    if not math.isclose(params.tau, drive.tau, rel_tol=1e-12):
        raise ConfigError("PhysicalParams.tau and DriveParams.tau differ")
    tau = drive.tau
    t_start = -6.0 * tau if t_start is None else t_start
    t_final = default_t_final(params) if t_final is None else t_final
    if t_start > -6.0 * tau:
        raise WindowTooShort(f"t_start={t_start:g} must be <= -6 tau = {-6 * tau:g}")
    if math.exp(-0.5 * params.gamma3N * t_final) >= 1e-8 or t_final < 6.0 * tau:
        raise WindowTooShort(f"t_final={t_final:g} leaves exp(-Γ t/2) >= 1e-8 or cuts the pulse")
    panel = tau / 8.0 if panel is None else panel
    npan = int(math.ceil((t_final - t_start) / panel))
    edges = np.linspace(t_start, t_final, npan + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    bamp = (drive.omega_a_area * drive.omega_b_area
            / (math.pi * tau * tau * 4.0 * drive.delta1 * drive.delta2))
    D, C_end = kernels.dsi_double_integral(edges, x, w, bamp, tau, float(params.gamma3N),
                                           float(dws), float(dwi))
    D += C_end * complex(math.cos(dwi * t_final), math.sin(dwi * t_final)) / (
        0.5 * params.gamma3N - 1j * dwi)
    return complex(D)


def dsi_grid(params, drive, ws, wi, **kw):
    ws = np.asarray(ws, dtype=float)
    wi = np.asarray(wi, dtype=float)
    out = np.empty((ws.size, wi.size), dtype=complex)
    for j, a in enumerate(ws):
        for k, b in enumerate(wi):
            out[j, k] = dsi_numeric(params, drive, a, b, **kw)
    return out


def oracle_report(params, drive, span=20.0, points=11, dt=1e-3):
    """Compare the numeric and closed-form amplitudes over a square grid and
    check the adiabatic upper-state solution."""
    axis = np.linspace(-span, span, points)
    num = dsi_grid(params, drive, axis, axis)
    ref = closed_form_dsi(params, drive, axis[:, None], axis[None, :])
    pointwise = float(np.max(np.abs(num - ref) / np.abs(ref)))
    a = np.abs(num) / np.max(np.abs(num))
    b = np.abs(ref) / np.max(np.abs(ref))
    normalized = float(np.max(np.abs(a - b)))
    traj = integrate_amplitudes(drive, dt=dt)
    return {
        "grid_points": points,
        "span": span,
        "max_pointwise_relative": pointwise,
        "max_normalized_abs_deviation": normalized,
        "adiabatic_deviation": traj.adiabatic_deviation(),
        "min_ground_population": float(np.min(np.abs(traj.E) ** 2)),
        "max_norm_drift": float(np.max(np.abs(traj.norm2() - 1.0))),
        "adiabatic_ok": drive.adiabatic_ok,
    }
