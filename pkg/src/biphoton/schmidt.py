"""Schmidt decomposition of a discretized joint spectrum.

The continuous problem is the eigenproblem of the one-photon kernels
K1 = ∫ f f* dwi and K2 = ∫ f f* dws. On a quadrature grid both reduce to
the SVD of ``M = sqrt(w_s) f sqrt(w_i)``: the squared singular values are
the Schmidt eigenvalues and the singular vectors divided by ``sqrt(w)``
are the mode functions.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sl

from .errors import NotAProbabilityVector, NotNormalized, RankTooLarge
from .spectral import FrequencyGrid, JointSpectrum

EIG_FLOOR = 1e-15
PAIR_TOL = 1e-2
# clusters closer than this are numerically tied: the SVD basis inside
# them is arbitrary and gets canonicalized
TIE_TOL = 1e-12
PROB_TOL = 1e-8


def _check_probability(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise NotAProbabilityVector("eigenvalues must be a non-empty 1-D list")
    if np.any(~np.isfinite(lam)) or np.any(lam < -PROB_TOL):
        raise NotAProbabilityVector("eigenvalues must be finite and non-negative")
    if abs(lam.sum() - 1.0) > PROB_TOL:
        raise NotAProbabilityVector(f"eigenvalues sum to {lam.sum():.12g}, not 1")
    return lam


def entropy(eigenvalues):
    """Entanglement entropy in bits, -sum(l log2 l) over l > 1e-15."""
    lam = _check_probability(eigenvalues)
    lam = lam[lam > EIG_FLOOR]
    return float(-np.sum(lam * np.log2(lam)))


def schmidt_number(eigenvalues):
    lam = _check_probability(eigenvalues)
    lam = lam[lam > EIG_FLOOR]
    return float(1.0 / np.sum(lam ** 2))


def pair_degeneracies(eigenvalues, rel_tol=PAIR_TOL):
    """Greedily pair consecutive eigenvalues whose relative gap is below ``rel_tol``.

    Returns ``(pairs, singles)``; pairs are ``(i, j, gap)`` with 1-based
    indices, singles are 1-based indices of unpaired values.
    """
    lam = [float(v) for v in eigenvalues if v > EIG_FLOOR]
    pairs, singles = [], []
    i = 0
    while i < len(lam):
        if i + 1 < len(lam):
            gap = (lam[i] - lam[i + 1]) / lam[i]
            if abs(gap) < rel_tol:
                pairs.append((i + 1, i + 2, abs(gap)))
                i += 2
                continue
        singles.append(i + 1)
        i += 1
    return pairs, singles


@dataclass(frozen=True)
class SchmidtResult:
    eigenvalues: np.ndarray
    signal_modes: np.ndarray = field(repr=False)  # (n_s, rank), column n is psi_n
    idler_modes: np.ndarray = field(repr=False)   # (n_i, rank), column n is phi_n
    entropy_bits: float
    schmidt_number: float
    pairs: list
    reconstruction_error: float
    tail_mass: float
    numerical_rank: int
    all_eigenvalues: np.ndarray = field(repr=False)
    signal_grid: FrequencyGrid = field(repr=False, default=None)
    idler_grid: FrequencyGrid = field(repr=False, default=None)

    @property
    def rank(self):
        return self.eigenvalues.size

    def reconstruct(self):
        return (self.signal_modes * np.sqrt(self.eigenvalues)) @ self.idler_modes.T

    def to_dict(self):
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "entropy_bits": float(self.entropy_bits),
            "schmidt_number": float(self.schmidt_number),
            "pairs": [[int(i), int(j), float(g)] for i, j, g in self.pairs],
            "reconstruction_error": float(self.reconstruction_error),
            "tail_mass": float(self.tail_mass),
            "rank": int(self.rank),
            "numerical_rank": int(self.numerical_rank),
        }


def peak_index(modes, rel=1e-9):
    """Per column, the first index whose modulus is within ``rel`` of the maximum.

    Mirror-symmetric modes have two equal peaks; taking the first one within
    a tolerance keeps the choice stable under rounding.
    """
    a = np.abs(modes)
    return np.argmax(a >= (1.0 - rel) * a.max(axis=0)[None, :], axis=0)


def _tie_clusters(lam):
    clusters, start = [], 0
    for k in range(1, lam.size + 1):
        if k == lam.size or lam[k - 1] <= EIG_FLOOR or (lam[k - 1] - lam[k]) / lam[k - 1] >= TIE_TOL:
            if k - start > 1:
                clusters.append((start, k))
            start = k
    return clusters


def _canonicalize_ties(U, Vh, lam, omega):
    """Inside each numerically tied cluster, pick the basis that diagonalizes
    the signal frequency and order it by the position of each mode's peak."""
    for a, b in _tie_clusters(lam):
        Uc = U[:, a:b]
        X = Uc.conj().T @ (omega[:, None] * Uc)
        _, R = np.linalg.eigh(0.5 * (X + X.conj().T))
        Uc = Uc @ R
        Vc = R.conj().T @ Vh[a:b]
        order = np.argsort(np.argmax(np.abs(Uc), axis=0), kind="stable")
        U[:, a:b] = Uc[:, order]
        Vh[a:b] = Vc[order]


def decompose(js: JointSpectrum, rank=None, pair_tol=PAIR_TOL):
    """Schmidt decomposition truncated to the leading ``rank`` terms.

    Entropy and Schmidt number always use the full spectrum; the discarded
    weight is reported as ``tail_mass``.
    """
    if not js.normalized:
        raise NotNormalized("decompose needs a normalized JointSpectrum")
    ns, ni = js.amplitude.shape
    full = min(ns, ni)
    if rank is None:
        rank = full
    if int(rank) != rank or rank < 1 or rank > full:
        raise RankTooLarge(f"rank must be in [1, {full}], got {rank}")
    rank = int(rank)

    M = js.symmetrized()
    U, s, Vh = sl.svd(M, full_matrices=False, lapack_driver="gesdd")
    lam = s ** 2
    sw_s = np.sqrt(js.signal_grid.weights)
    sw_i = np.sqrt(js.idler_grid.weights)
    _canonicalize_ties(U, Vh, lam, np.asarray(js.signal_grid.nodes))

    # largest |psi| element real positive; phi takes the conjugate phase
    idx = peak_index(U)
    ph = U[idx, np.arange(U.shape[1])]
    ph = ph / np.abs(ph)
    U = U * ph.conj()[None, :]
    Vh = Vh * ph[:, None]

    S = entropy(lam)
    K = schmidt_number(lam)
    numerical_rank = int(np.count_nonzero(lam > EIG_FLOOR))

    Ur, sr, Vr = U[:, :rank], s[:rank], Vh[:rank]
    resid = M - (Ur * sr) @ Vr
    err = float(np.linalg.norm(resid))

    pairs, _ = pair_degeneracies(lam[:rank], pair_tol)
    return SchmidtResult(
        eigenvalues=lam[:rank].copy(),
        signal_modes=Ur / sw_s[:, None],
        idler_modes=Vr.T / sw_i[:, None],
        entropy_bits=S,
        schmidt_number=K,
        pairs=pairs,
        reconstruction_error=err,
        tail_mass=float(max(lam[rank:].sum(), 0.0)),
        numerical_rank=numerical_rank,
        all_eigenvalues=lam,
        signal_grid=js.signal_grid,
        idler_grid=js.idler_grid,
    )


def eigenvalues_only(js: JointSpectrum):
    """Schmidt eigenvalues without mode functions (singular values only)."""
    if not js.normalized:
        raise NotNormalized("eigenvalues_only needs a normalized JointSpectrum")
    s = sl.svdvals(js.symmetrized())
    return s ** 2


def metrics(js: JointSpectrum):
    lam = eigenvalues_only(js)
    return lam, entropy(lam), schmidt_number(lam)


def kernel_eigenvalues(js: JointSpectrum, side="signal"):
    """Eigenvalues of the one-photon kernel, built explicitly by quadrature.

    This is the slow reference route: K1[j, j'] = sum_k w_i[k] f[j,k] f*[j',k],
    symmetrized with the outer weights and handed to a Hermitian solver.
    """
    f = np.asarray(js.amplitude)
    ws, wi = js.signal_grid.weights, js.idler_grid.weights
    if side == "signal":
        K = (f * wi[None, :]) @ f.conj().T
        sw = np.sqrt(ws)
    elif side == "idler":
        K = (f.T * ws[None, :]) @ f.conj()
        sw = np.sqrt(wi)
    else:
        raise ValueError(f"side must be 'signal' or 'idler', got {side!r}")
    H = sw[:, None] * K * sw[None, :]
    ev = sl.eigh(0.5 * (H + H.conj().T), eigvals_only=True)[::-1]
    ev = np.clip(ev, 0.0, None)
    return ev / ev.sum()


def mode_overlap(a, b, weights):
    """∫ min(|a|², |b|²) dω for two unit-norm mode functions."""
    return float(np.sum(weights * np.minimum(np.abs(a) ** 2, np.abs(b) ** 2)))


def inner_products(modes, weights):
    return modes.conj().T @ (weights[:, None] * modes)
