import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biphoton.errors import NotAProbabilityVector, NotNormalized, RankTooLarge
from biphoton.schmidt import (decompose, eigenvalues_only, entropy, inner_products, kernel_eigenvalues,
                              metrics, mode_overlap, pair_degeneracies, peak_index, schmidt_number)
from biphoton.spectral import (FrequencyGrid, JointSpectrum, MultiplexConfig, build_joint_spectrum)

from conftest import pairs

# Single-ensemble entropy at default parameters, frozen from the kernel route
# (dense K1 by quadrature, Hermitian eigensolve) on a 2048-node grid.
S1_KERNEL_2X = 1.2725102194637636
K1_KERNEL_2X = 1.529794857730383


def _gauss(x, mu, s):
    g = np.exp(-((x - mu) ** 2) / (4 * s * s))
    return g


def _unit(v, w):
    return v / math.sqrt(np.sum(w * np.abs(v) ** 2))


def _js_from(amplitude, g):
    return JointSpectrum(g, g, amplitude, True, 1.0)


@pytest.fixture(scope="module")
def single(params, grid):
    return decompose(build_joint_spectrum(params, MultiplexConfig.single(), grid, grid))


@pytest.fixture(scope="module")
def fig2a_left(params, grid):
    return decompose(build_joint_spectrum(params, pairs((30, 0), (-30, 0)), grid, grid))


def test_entropy_examples():
    assert entropy([1.0]) == 0.0
    assert entropy([0.5, 0.5]) == pytest.approx(1.0, abs=1e-15)
    assert entropy([0.25] * 4) == pytest.approx(2.0, abs=1e-15)


def test_schmidt_number_examples():
    assert schmidt_number([1.0]) == 1.0
    assert schmidt_number([0.25] * 4) == pytest.approx(4.0, rel=1e-15)
    assert schmidt_number([0.5, 0.25, 0.25]) == pytest.approx(1 / 0.375, rel=1e-15)


@pytest.mark.parametrize("bad", [[0.5, 0.6], [1.2, -0.2], [], [math.nan, 1.0]])
def test_not_a_probability_vector(bad):
    with pytest.raises(NotAProbabilityVector):
        entropy(bad)
    with pytest.raises(NotAProbabilityVector):
        schmidt_number(bad)


def test_entropy_floor_ignores_numerical_zero():
    assert entropy([1.0, 1e-16]) == 0.0


def test_pairing_example():
    pairs_, singles = pair_degeneracies([0.3, 0.3, 0.2, 0.2])
    assert [(i, j) for i, j, _ in pairs_] == [(1, 2), (3, 4)]
    assert singles == []
    pairs_, singles = pair_degeneracies([0.5, 0.3, 0.2])
    assert pairs_ == [] and singles == [1, 2, 3]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=30))
def test_metric_bounds(raw):
    lam = np.sort(np.array(raw) / np.sum(raw))[::-1]
    S, K = entropy(lam), schmidt_number(lam)
    assert S >= -1e-12
    assert 1.0 - 1e-12 <= K <= lam.size + 1e-9
    assert K <= 2.0 ** S * (1 + 1e-12)


def test_separable_input():
    g = FrequencyGrid.uniform(-20, 20, 201)
    a = _unit(_gauss(g.nodes, 1.0, 1.5), g.weights)
    b = _unit(_gauss(g.nodes, -2.0, 0.8), g.weights)
    res = decompose(_js_from(np.outer(a, b).astype(complex), g))
    assert res.eigenvalues[0] == pytest.approx(1.0, abs=1e-10)
    assert res.entropy_bits == pytest.approx(0.0, abs=1e-10)
    assert res.schmidt_number == pytest.approx(1.0, abs=1e-10)


def test_bell_like_input():
    g = FrequencyGrid.uniform(-20, 20, 401)
    p1 = _unit(_gauss(g.nodes, -10, 1.0), g.weights)
    p2 = _unit(_gauss(g.nodes, 10, 1.0), g.weights)
    # p1, p2 overlap ~ exp(-50), orthonormal to double precision
    f = (np.outer(p1, p2) + np.outer(p2, p1)) / math.sqrt(2)
    res = decompose(_js_from(f.astype(complex), g), rank=4)
    assert res.eigenvalues[:2] == pytest.approx([0.5, 0.5], abs=1e-10)
    assert res.entropy_bits == pytest.approx(1.0, abs=1e-9)
    assert res.schmidt_number == pytest.approx(2.0, abs=1e-9)


def test_single_ensemble_entropy_matches_kernel_oracle(single):
    assert abs(single.entropy_bits - S1_KERNEL_2X) < 1e-4
    assert abs(single.schmidt_number - K1_KERNEL_2X) < 1e-3


def test_kernel_sides_and_svd_agree(params, small_grid):
    js = build_joint_spectrum(params, pairs((20, 0), (-20, 0)), small_grid, small_grid)
    ks = entropy(kernel_eigenvalues(js, "signal"))
    ki = entropy(kernel_eigenvalues(js, "idler"))
    lam, S, _ = metrics(js)
    assert abs(ks - ki) < 1e-8
    assert abs(ks - S) < 1e-8


def test_invariants_full_rank(fig2a_left):
    r = fig2a_left
    assert np.all(r.all_eigenvalues >= 0)
    assert abs(r.all_eigenvalues.sum() - 1) < 1e-10
    eye = np.eye(r.rank)
    w = r.signal_grid.weights
    assert np.max(np.abs(inner_products(r.signal_modes, w) - eye)) < 1e-8
    assert np.max(np.abs(inner_products(r.idler_modes, r.idler_grid.weights) - eye)) < 1e-8
    assert r.reconstruction_error < 1e-8
    assert r.schmidt_number <= 2 ** r.entropy_bits
    assert 1 <= r.schmidt_number <= r.numerical_rank


@pytest.mark.parametrize("rank", [1, 4, 16])
def test_truncated_reconstruction(params, small_grid, rank):
    js = build_joint_spectrum(params, pairs((30, 0), (-30, 0)), small_grid, small_grid)
    res = decompose(js, rank=rank)
    assert res.reconstruction_error ** 2 == pytest.approx(1 - res.eigenvalues.sum(), abs=1e-8)
    assert res.tail_mass == pytest.approx(1 - res.eigenvalues.sum(), abs=1e-12)
    # reconstruct() is the same approximation as seen through the weights
    diff = js.amplitude - res.reconstruct()
    err2 = np.einsum("j,jk,k->", small_grid.weights, np.abs(diff) ** 2, small_grid.weights)
    assert err2 == pytest.approx(res.reconstruction_error ** 2, abs=1e-10)


def test_fig2a_left_pairs(fig2a_left):
    lam = fig2a_left.eigenvalues
    assert (lam[0] - lam[1]) / lam[0] < 1e-2
    assert (lam[2] - lam[3]) / lam[2] < 1e-2
    assert [p[:2] for p in fig2a_left.pairs[:2]] == [(1, 2), (3, 4)]


def test_fig3b_eight_paired(params, grid):
    lam = eigenvalues_only(build_joint_spectrum(params, pairs((90, 0), (30, 0), (-30, 0), (-90, 0)), grid, grid))
    ps, _ = pair_degeneracies(lam[:8])
    assert len(ps) == 4


def test_nonsymmetric_not_paired(params, grid):
    lam = eigenvalues_only(build_joint_spectrum(params, pairs((30, 30), (-30, -30)), grid, grid))
    ps, _ = pair_degeneracies(lam[:4])
    assert ps == []


def test_phase_convention(fig2a_left):
    # modes with numerically meaningful eigenvalues
    psi = fig2a_left.signal_modes[:, :fig2a_left.numerical_rank]
    idx = peak_index(psi)
    top = psi[idx, np.arange(psi.shape[1])]
    assert np.all(np.abs(top.imag) < 1e-12 * np.abs(top))
    assert np.all(top.real > 0)


def test_fig2d_left_idler_symmetry(params, grid):
    res = decompose(build_joint_spectrum(params, pairs((30, 30), (-30, -30)), grid, grid), rank=2)
    d = np.abs(res.idler_modes[:, 0]) ** 2
    assert np.max(np.abs(d - d[::-1])) < 1e-6 * d.max()


def test_translation_invariance(params, small_grid):
    cfg = pairs((20, 0), (-20, 0))
    base = metrics(build_joint_spectrum(params, cfg, small_grid, small_grid))
    c = 12.5
    # moving every idler center by -c and the grids by the matching amounts
    moved = cfg.shifted(ddp=c, ddq=c)
    sg, ig = small_grid.shifted(0.0), small_grid.shifted(-c)
    other = metrics(build_joint_spectrum(params, moved, sg, ig))
    assert abs(base[1] - other[1]) < 1e-6
    assert abs(base[2] - other[2]) < 1e-6


def test_mode_overlap_separates_with_shift(params, grid):
    near = decompose(build_joint_spectrum(params, pairs((30, 0), (-30, 0)), grid, grid), rank=2)
    far = decompose(build_joint_spectrum(params, pairs((100, 0), (-100, 0)), grid, grid), rank=2)
    w = grid.weights
    assert mode_overlap(near.signal_modes[:, 0], near.signal_modes[:, 1], w) > 0.5
    assert mode_overlap(far.signal_modes[:, 0], far.signal_modes[:, 1], w) < 0.1


def test_deterministic_tie_order(params, grid):
    # at +-100 the leading pair is tied to machine precision; the basis must still be reproducible
    js = build_joint_spectrum(params, pairs((100, 0), (-100, 0)), grid, grid)
    a = decompose(js, rank=4)
    b = decompose(js, rank=4)
    assert np.array_equal(a.signal_modes, b.signal_modes)
    peaks = grid.nodes[np.argmax(np.abs(a.signal_modes[:, :2]), axis=0)]
    assert peaks[0] < peaks[1]


def test_errors(params, small_grid):
    js = build_joint_spectrum(params, MultiplexConfig.single(), small_grid, small_grid, normalize=False)
    with pytest.raises(NotNormalized):
        decompose(js)
    js = build_joint_spectrum(params, MultiplexConfig.single(), small_grid, small_grid)
    with pytest.raises(RankTooLarge):
        decompose(js, rank=small_grid.n + 1)
    with pytest.raises(RankTooLarge):
        decompose(js, rank=0)


def test_three_ensemble_block_structure(params, grid):
    # the +-60 blocks pair up; the unshifted block contributes an unpartnered value near them
    lam = eigenvalues_only(build_joint_spectrum(params, pairs((60, 0), (0, 0), (-60, 0)), grid, grid))
    ps, singles = pair_degeneracies(lam[:6])
    assert [p[:2] for p in ps] == [(1, 2), (4, 5)]
    assert singles == [3, 6]
    assert lam[:3].sum() == pytest.approx(3 * lam[2], rel=0.05)
