"""Joint spectral amplitude of cascade-emitted photon pairs.

All frequencies are detunings in units of the intrinsic decay rate
``gamma3`` and all times are in units of ``1/gamma3``. A single ensemble
driven by Gaussian pulses of width ``tau`` emits with amplitude::

    f(ws, wi) = exp(-(ws + wi)**2 * tau**2 / 8) / (gamma3N/2 - 1j*wi)

and frequency-shifted copies from several ensembles add coherently.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import ConfigError, NormIsZero

# fraction of the analytic spectral mass that must land inside the window
MIN_CAPTURED_FRACTION = 1e-6


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PhysicalParams:
    gamma3N: float = 5.0
    tau: float = 0.25
    gamma3: float = 1.0

    def __post_init__(self):
        for name in ("gamma3N", "tau", "gamma3"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite number, got {v!r}")
        if self.gamma3 != 1.0:
            raise ConfigError("gamma3 is the frequency unit and must be 1")
        if self.gamma3N < self.gamma3:
            raise ConfigError(f"gamma3N must be >= gamma3 (optical density >= 0), got {self.gamma3N}")
        if self.tau <= 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")

    @property
    def optical_density(self):
        return self.gamma3N / self.gamma3 - 1.0


@dataclass(frozen=True)
class MultiplexConfig:
    """Per-ensemble shifts ``(dp, dq)``.

    ``dp`` shifts the idler only, ``dq`` is the combined signal+idler shift.
    ``weights`` are optional complex amplitudes per ensemble (default 1).
    """

    shifts: tuple
    weights: tuple = None

    def __post_init__(self):
        shifts = tuple((float(dp), float(dq)) for dp, dq in self.shifts)
        if not shifts:
            raise ConfigError("at least one ensemble is required")
        if not all(math.isfinite(v) for pair in shifts for v in pair):
            raise ConfigError("shifts must be finite")
        weights = self.weights
        if weights is None:
            weights = (1.0 + 0j,) * len(shifts)
        weights = tuple(complex(w) for w in weights)
        if len(weights) != len(shifts):
            raise ConfigError("one weight per ensemble is required")
        if not all(math.isfinite(w.real) and math.isfinite(w.imag) for w in weights):
            raise ConfigError("weights must be finite")
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def single(cls):
        return cls(((0.0, 0.0),))

    @property
    def n_mp(self):
        return len(self.shifts)

    @property
    def dp(self):
        return np.array([s[0] for s in self.shifts])

    @property
    def dq(self):
        return np.array([s[1] for s in self.shifts])

    def __add__(self, other):
        return MultiplexConfig(self.shifts + other.shifts, self.weights + other.weights)

    def shifted(self, ddp=0.0, ddq=0.0):
        return MultiplexConfig(tuple((dp + ddp, dq + ddq) for dp, dq in self.shifts), self.weights)


@dataclass(frozen=True)
class FrequencyGrid:
    """Quadrature nodes and weights on ``[lo, hi]``.

    Use :meth:`uniform` (composite trapezoid) or :meth:`gauss_legendre`.
    """

    lo: float
    hi: float
    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    kind: str = "trapezoid"

    @staticmethod
    def _check(lo, hi, n):
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise ConfigError(f"grid bounds must satisfy lo < hi, got lo={lo}, hi={hi}")
        if int(n) != n or n < 2:
            raise ConfigError(f"grid needs at least 2 nodes, got n={n}")

    @classmethod
    def uniform(cls, lo=-300.0, hi=300.0, n=1024):
        cls._check(lo, hi, n)
        n = int(n)
        nodes = np.linspace(lo, hi, n)
        h = (hi - lo) / (n - 1)
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
        return cls(float(lo), float(hi), n, _frozen(nodes), _frozen(w), "trapezoid")

    @classmethod
    def gauss_legendre(cls, lo=-300.0, hi=300.0, n=1024, order=16):
        cls._check(lo, hi, n)
        n = int(n)
        if n % order:
            raise ConfigError(f"n={n} must be a multiple of the panel order {order}")
        x, w = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(lo, hi, n // order + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return cls(float(lo), float(hi), n, _frozen(nodes), _frozen(weights), "gauss")

    @classmethod
    def from_spec(cls, lo=-300.0, hi=300.0, n=1024, quadrature="trapezoid"):
        if quadrature == "trapezoid":
            return cls.uniform(lo, hi, n)
        if quadrature == "gauss":
            return cls.gauss_legendre(lo, hi, n)
        raise ConfigError(f"unknown quadrature {quadrature!r}")

    @property
    def is_uniform(self):
        return self.kind == "trapezoid"

    @property
    def spacing(self):
        if not self.is_uniform:
            raise ValueError("spacing is only defined for uniform grids")
        return (self.hi - self.lo) / (self.n - 1)

    def shifted(self, c):
        return FrequencyGrid(self.lo + c, self.hi + c, self.n,
                             _frozen(self.nodes + c), self.weights, self.kind)

    def refined(self):
        """Uniform grid with halved spacing; every current node is kept."""
        return FrequencyGrid.uniform(self.lo, self.hi, 2 * self.n - 1)


@dataclass(frozen=True)
class JointSpectrum:
    signal_grid: FrequencyGrid
    idler_grid: FrequencyGrid
    amplitude: np.ndarray = field(repr=False)
    normalized: bool = False
    scale: float = 1.0
    params: PhysicalParams = None
    config: MultiplexConfig = None
    generation_amplitude: complex = None

    def __post_init__(self):
        a = self.amplitude
        if a.shape != (self.signal_grid.n, self.idler_grid.n):
            raise ValueError(f"amplitude shape {a.shape} does not match grids "
                             f"({self.signal_grid.n}, {self.idler_grid.n})")
        if a.flags.writeable:
            object.__setattr__(self, "amplitude", _frozen(a, complex))

    def weighted_norm2(self):
        ws = self.signal_grid.weights
        wi = self.idler_grid.weights
        return float(np.einsum("j,jk,k->", ws, np.abs(self.amplitude) ** 2, wi))

    def symmetrized(self):
        """sqrt(w_s) * f * sqrt(w_i): the matrix whose SVD is the Schmidt decomposition."""
        return (np.sqrt(self.signal_grid.weights)[:, None] * self.amplitude
                * np.sqrt(self.idler_grid.weights)[None, :])

    def intensity(self):
        return np.abs(self.amplitude) ** 2


def eval_single(params, dws, dwi):
    """Unnormalized single-ensemble amplitude; broadcasts over arrays."""
    dws = np.asarray(dws, dtype=float)
    dwi = np.asarray(dwi, dtype=float)
    out = np.exp(-((dws + dwi) ** 2) * params.tau ** 2 / 8.0) / (0.5 * params.gamma3N - 1j * dwi)
    return out[()] if out.ndim == 0 else out


def eval_multiplexed(params, cfg, dws, dwi):
    dws = np.asarray(dws, dtype=float)
    dwi = np.asarray(dwi, dtype=float)
    out = 0j
    for (dp, dq), wt in zip(cfg.shifts, cfg.weights):
        out = out + wt * np.exp(-((dws + dwi + dq) ** 2) * params.tau ** 2 / 8.0) / (
            0.5 * params.gamma3N - 1j * (dwi + dp))
    out = np.asarray(out, dtype=complex)
    return out[()] if out.ndim == 0 else out


def total_mass(params, cfg):
    """Incoherent sum of each ensemble's full-plane ∬|term|², used as a scale."""
    per_term = (2.0 * math.pi / params.gamma3N) * (2.0 * math.sqrt(math.pi) / params.tau)
    return per_term * sum(abs(w) ** 2 for w in cfg.weights)


def build_joint_spectrum(params, cfg, sgrid, igrid, normalize=True, generation_amplitude=None):
    amp = kernels.jsa_fill(
        np.ascontiguousarray(sgrid.nodes), np.ascontiguousarray(igrid.nodes),
        np.ascontiguousarray(cfg.dp), np.ascontiguousarray(cfg.dq),
        np.array(cfg.weights, dtype=np.complex128),
        float(params.gamma3N), float(params.tau))
    js = JointSpectrum(sgrid, igrid, amp, False, 1.0, params, cfg, generation_amplitude)
    if not normalize:
        return js
    norm2 = js.weighted_norm2()
    mass = total_mass(params, cfg)
    if not math.isfinite(norm2) or norm2 <= 0.0 or norm2 < MIN_CAPTURED_FRACTION * mass:
        raise NormIsZero(
            f"spectral mass inside the window is {norm2:.3g} of an expected {mass:.3g}; "
            "the shifts put the spectrum outside the grid")
    scale = math.sqrt(norm2)
    return JointSpectrum(sgrid, igrid, amp / scale, True, scale, params, cfg, generation_amplitude)


def support_center(cfg):
    """(signal, idler) centers of each ensemble's spectral peak."""
    return [(dp - dq, -dp) for dp, dq in cfg.shifts]


def spectral_extent(params):
    """Half-width used to decide whether an ensemble sits inside the window."""
    return 2.0 * max(4.0 / params.tau, 4.0 * params.gamma3N)


def in_window(params, cfg, sgrid, igrid):
    r = spectral_extent(params)
    for cs, ci in support_center(cfg):
        if cs - r < sgrid.lo or cs + r > sgrid.hi or ci - r < igrid.lo or ci + r > igrid.hi:
            return False
    return True
