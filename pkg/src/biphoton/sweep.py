"""Shift sweeps, entropy maximization and scaling fits over ensemble count."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigError, InsufficientPoints, NormIsZero
from .schmidt import metrics
from .spectral import (FrequencyGrid, MultiplexConfig, PhysicalParams,
                       build_joint_spectrum, in_window)

FAMILIES = ("symmetric", "nonsymmetric")
N_LAMBDA = 8


def family_config(family, n_mp, magnitudes):
    """Shifts for ``n_mp`` ensembles built from the positive magnitudes.

    symmetric: ±a pairs (plus 0 when n_mp is odd) on the idler, dq = 0.
    nonsymmetric: the same dp values with dq = dp.
    """
    if family not in FAMILIES:
        raise ConfigError(f"family must be one of {FAMILIES}, got {family!r}")
    if n_mp < 1:
        raise ConfigError("n_mp must be >= 1")
    mags = list(magnitudes)
    if len(mags) != n_mp // 2:
        raise ConfigError(f"{n_mp} ensembles take {n_mp // 2} magnitudes, got {len(mags)}")
    dps = []
    for a in mags:
        dps += [float(a), -float(a)]
    if n_mp % 2:
        dps.append(0.0)
    if family == "symmetric":
        return MultiplexConfig(tuple((dp, 0.0) for dp in dps))
    return MultiplexConfig(tuple((dp, dp) for dp in dps))


def equal_separation(n_mp, dp1):
    """Magnitudes for equally spaced shifts whose innermost nonzero value is dp1.

    Even counts give ±dp1, ±3dp1, ...; odd counts give 0, ±dp1, ±2dp1, ...
    """
    if n_mp % 2 == 0:
        return [(2 * k - 1) * dp1 for k in range(1, n_mp // 2 + 1)]
    return [k * dp1 for k in range(1, n_mp // 2 + 1)]


@dataclass(frozen=True)
class SweepSpec:
    params: PhysicalParams
    signal_grid: FrequencyGrid
    idler_grid: FrequencyGrid
    family: str
    n_mp: int
    dp1_values: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if int(self.n_mp) != self.n_mp or self.n_mp < 1:
            raise ConfigError("n_mp must be a positive integer")
        if len(self.dp1_values) == 0:
            raise ConfigError("a sweep needs at least one dp1 value")

    @classmethod
    def linear(cls, params, sgrid, igrid, family, n_mp, start, stop, steps):
        if int(steps) != steps or steps < 1:
            raise ConfigError(f"steps must be a positive integer, got {steps}")
        values = tuple(float(v) for v in np.linspace(start, stop, int(steps) + 1))
        return cls(params, sgrid, igrid, family, int(n_mp), values)

    def config(self, dp1):
        return family_config(self.family, self.n_mp, equal_separation(self.n_mp, dp1))


@dataclass(frozen=True)
class SweepRow:
    dp1: float
    entropy_bits: float
    schmidt_number: float
    eigenvalues: tuple
    in_window: bool


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec = field(repr=False)
    rows: tuple

    def entropies(self, only_in_window=True):
        return np.array([r.entropy_bits for r in self.rows if r.in_window or not only_in_window])

    def dp1(self, only_in_window=True):
        return np.array([r.dp1 for r in self.rows if r.in_window or not only_in_window])


def evaluate(params, cfg, sgrid, igrid):
    """(S, K, eigenvalues) for one configuration."""
    js = build_joint_spectrum(params, cfg, sgrid, igrid)
    lam, S, K = metrics(js)
    return S, K, lam


def _row(spec, dp1):
    cfg = spec.config(dp1)
    if not in_window(spec.params, cfg, spec.signal_grid, spec.idler_grid):
        return SweepRow(dp1, math.nan, math.nan, (math.nan,) * N_LAMBDA, False)
    S, K, lam = evaluate(spec.params, cfg, spec.signal_grid, spec.idler_grid)
    top = list(lam[:N_LAMBDA]) + [0.0] * max(0, N_LAMBDA - lam.size)
    return SweepRow(dp1, S, K, tuple(float(v) for v in top), True)


def run_sweep(spec: SweepSpec, workers=1):
    """One decomposition per dp1 value; rows come back in input order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(lambda v: _row(spec, v), spec.dp1_values))
    else:
        rows = tuple(_row(spec, v) for v in spec.dp1_values)
    return SweepResult(spec, rows)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(fun, a, b, tol):
    """Golden-section search for a maximum of ``fun`` on [a, b].

    Returns (x, fun(x)) for the best point evaluated.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    best = (c, fc) if fc >= fd else (d, fd)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
        for x, fx in ((c, fc), (d, fd)):
            if fx > best[1]:
                best = (x, fx)
    return best


@dataclass(frozen=True)
class Optimum:
    family: str
    n_mp: int
    magnitudes: tuple
    config: MultiplexConfig
    entropy_bits: float
    schmidt_number: float
    eigenvalues: np.ndarray = field(repr=False)
    evaluations: int = 0


def maximize_entropy(family, n_mp, bounds=(0.0, 100.0), params=None, sgrid=None, igrid=None,
                     rounds=2, tol=0.5, start=None):
    """Coordinate search over the family's free shift magnitudes.

    Each round runs a golden-section search on every magnitude in turn
    with the others held fixed. The start point is the equal-separation
    configuration with innermost shift max(4/tau, 4 gamma3N), clipped to
    ``bounds``.
    """
    params = params or PhysicalParams()
    sgrid = sgrid or FrequencyGrid.uniform()
    igrid = igrid or sgrid
    lo, hi = map(float, bounds)
    if not hi > lo:
        raise ConfigError("bounds must satisfy lo < hi")
    cache = {}

    def score(mags):
        key = tuple(round(m, 12) for m in mags)
        if key not in cache:
            cfg = family_config(family, n_mp, mags)
            if not in_window(params, cfg, sgrid, igrid):
                cache[key] = (-math.inf, math.nan, None)
            else:
                try:
                    S, K, lam = evaluate(params, cfg, sgrid, igrid)
                except NormIsZero:
                    S, K, lam = -math.inf, math.nan, None
                cache[key] = (S, K, lam)
        return cache[key]

    k = n_mp // 2
    if start is None:
        d0 = max(4.0 / params.tau, 4.0 * params.gamma3N)
        start = [min(max(m, lo), hi) for m in equal_separation(n_mp, d0)]
    mags = [float(m) for m in start]
    if len(mags) != k:
        raise ConfigError(f"start needs {k} magnitudes")
    best = score(mags)[0]
    for _ in range(rounds if k else 0):
        for i in range(k):
            def along(x, i=i):
                trial = list(mags)
                trial[i] = x
                return score(trial)[0]
            x, fx = golden_max(along, lo, hi, tol)
            if fx > best:
                mags[i] = x
                best = fx
    S, K, lam = score(mags)
    return Optimum(family, n_mp, tuple(mags), family_config(family, n_mp, mags), S, K, lam, len(cache))


@dataclass(frozen=True)
class ScalingFit:
    n_mp: tuple
    entropy_max: tuple
    schmidt_max: tuple
    s_excess: float
    entropy_gain: tuple          # S_M(N) - S_M(1) when N = 1 is present
    k_slope: float
    k_intercept: float
    k_residuals: tuple
    k_relative_residual: float

    def to_dict(self):
        return {
            "n_mp": list(self.n_mp),
            "S_M": list(self.entropy_max),
            "K_M": list(self.schmidt_max),
            "s_excess": self.s_excess,
            "entropy_gain": list(self.entropy_gain),
            "log2_n_mp": [math.log2(n) for n in self.n_mp],
            "k_slope": self.k_slope,
            "k_intercept": self.k_intercept,
            "k_residuals": list(self.k_residuals),
            "k_relative_residual": self.k_relative_residual,
        }


def fit_scaling(n_mp, entropy_max, schmidt_max):
    """Excess entropy S_M - log2 N averaged over N, and a least-squares line for K_M."""
    n = np.asarray(n_mp, dtype=float)
    S = np.asarray(entropy_max, dtype=float)
    K = np.asarray(schmidt_max, dtype=float)
    if n.size < 3 or S.size != n.size or K.size != n.size:
        raise InsufficientPoints(f"need at least 3 matching points, got {n.size}")
    s_ex = float(np.mean(S - np.log2(n)))
    X = np.column_stack([n, np.ones_like(n)])
    (slope, intercept), *_ = np.linalg.lstsq(X, K, rcond=None)
    res = K - (slope * n + intercept)
    rel = float(np.max(np.abs(res) / np.abs(K)))
    if 1 in n_mp:
        base = S[list(n_mp).index(1)]
        gain = tuple(float(v) for v in S - base)
    else:
        gain = ()
    return ScalingFit(tuple(int(v) for v in n_mp), tuple(map(float, S)), tuple(map(float, K)),
                      s_ex, gain, float(slope), float(intercept),
                      tuple(float(v) for v in res), rel)


def discrete_block_mass(single_eigenvalues, n_mp):
    """Top 2·N_MP eigenvalue mass if the state were N_MP disjoint equal copies
    of the single-ensemble spectrum."""
    lam = np.sort(np.repeat(np.asarray(single_eigenvalues) / n_mp, n_mp))[::-1]
    return float(lam[:2 * n_mp].sum())


def scaling_study(n_values=(1, 2, 3, 4), family="symmetric", bounds=(0.0, 100.0), params=None,
                  sgrid=None, igrid=None, rounds=2, tol=0.5):
    opts = [maximize_entropy(family, n, bounds, params, sgrid, igrid, rounds, tol) for n in n_values]
    fit = fit_scaling(n_values, [o.entropy_bits for o in opts], [o.schmidt_number for o in opts])
    return opts, fit

