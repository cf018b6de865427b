"""Acceptance criteria 1-8, each at its stated tolerance.

Every test records one PASS/FAIL line, printed again in the terminal
summary. Run on its own with ``pytest tests/test_acceptance.py -s``.
"""
import filecmp
import json
import math
import os
import time

import numpy as np
import pytest

from biphoton.cli import main
from biphoton.dynamics import DriveParams, oracle_report
from biphoton.schmidt import decompose, eigenvalues_only, inner_products, mode_overlap, pair_degeneracies
from biphoton.spectral import MultiplexConfig, build_joint_spectrum, in_window
from biphoton.sweep import SweepSpec, run_sweep, scaling_study
from biphoton.timedomain import dominant_period, tail_decay_rate, to_time

from conftest import pairs, record

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIGS = os.path.join(ROOT, "configs")


def test_criterion_1_normalization_suite(params, grid):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst = {"sum": 0.0, "ortho": 0.0, "recon": 0.0}
    done = 0
    while done < 20:
        n = int(rng.integers(1, 5))
        cfg = MultiplexConfig(tuple((float(rng.uniform(-100, 100)), float(rng.uniform(-60, 60)))
                                    for _ in range(n)))
        if not in_window(params, cfg, grid, grid):
            continue
        rank = int(rng.integers(1, 33))
        res = decompose(build_joint_spectrum(params, cfg, grid, grid), rank=rank)
        eye = np.eye(rank)
        worst["sum"] = max(worst["sum"], abs(res.all_eigenvalues.sum() - 1))
        worst["ortho"] = max(worst["ortho"],
                             np.max(np.abs(inner_products(res.signal_modes, grid.weights) - eye)),
                             np.max(np.abs(inner_products(res.idler_modes, grid.weights) - eye)))
        worst["recon"] = max(worst["recon"], abs(res.reconstruction_error ** 2 - (1 - res.eigenvalues.sum())))
        done += 1
    elapsed = time.perf_counter() - t0
    ok = worst["sum"] < 1e-10 and worst["ortho"] < 1e-8 and worst["recon"] < 1e-8 and elapsed < 60
    assert record(1, "normalization & orthonormality", ok,
                  f"sum {worst['sum']:.1e}, ortho {worst['ortho']:.1e}, recon {worst['recon']:.1e}, "
                  f"{elapsed:.1f}s")


def test_criterion_2_oracle_equivalence(params):
    t0 = time.perf_counter()
    rep = oracle_report(params, DriveParams(0.1, 0.1, 200.0, 200.0, params.tau), span=20.0, points=11)
    elapsed = time.perf_counter() - t0
    ok = (rep["max_normalized_abs_deviation"] < 1e-5 and rep["max_pointwise_relative"] < 1e-5
          and rep["adiabatic_deviation"] < 0.05 and elapsed < 120)
    assert record(2, "oracle equivalence", ok,
                  f"normalized Linf {rep['max_normalized_abs_deviation']:.1e}, "
                  f"pointwise {rep['max_pointwise_relative']:.1e}, "
                  f"adiabatic {rep['adiabatic_deviation']:.3f}, {elapsed:.1f}s")


SYMMETRIC = {
    2: [(30, 0), (-30, 0)],
    3: [(60, 0), (0, 0), (-60, 0)],
    4: [(30, 0), (-30, 0), (90, 0), (-90, 0)],
}


def test_criterion_3_degeneracy_pairing(params, grid):
    notes, ok = [], True
    for n, shifts in SYMMETRIC.items():
        lam = eigenvalues_only(build_joint_spectrum(params, pairs(*shifts), grid, grid))[:2 * n]
        found, singles = pair_degeneracies(lam, 1e-2)
        sym_ok = len(found) == n and not singles
        control = pairs(*[(p, p) for p, _ in shifts])
        lam_c = eigenvalues_only(build_joint_spectrum(params, control, grid, grid))[:2 * n]
        found_c, _ = pair_degeneracies(lam_c, 1e-2)
        ok &= sym_ok and not found_c
        notes.append(f"N={n}: {len(found)}/{n} pairs" + ("" if sym_ok else f" unpaired {singles}")
                     + f", control pairs {len(found_c)}")
    assert record(3, "degeneracy pairing", ok, "; ".join(notes))


def test_criterion_4_scaling_laws(params, grid):
    t0 = time.perf_counter()
    opts, fit = scaling_study((1, 2, 3, 4), "symmetric", (0.0, 100.0), params, grid, grid)
    elapsed = time.perf_counter() - t0
    gains = dict(zip(fit.n_mp, fit.entropy_gain))
    tol = {2: 0.2, 3: 0.2, 4: 0.3}
    dev = {n: gains[n] - math.log2(n) for n in tol}
    ok = all(abs(dev[n]) <= tol[n] for n in tol) and fit.k_relative_residual < 0.1 and elapsed < 600
    assert record(4, "scaling laws", ok,
                  "S_M-S_1-log2N " + ", ".join(f"N={n}: {dev[n]:+.3f}" for n in tol)
                  + f"; K_M fit residual {fit.k_relative_residual:.3f}; {elapsed:.0f}s")


def test_criterion_5_saturation_and_control(params, grid):
    threshold = max(4 / params.tau, 4 * params.gamma3N)
    sym = run_sweep(SweepSpec.linear(params, grid, grid, "symmetric", 2, 0.0, 100.0, 20))
    d, S = sym.dp1(), sym.entropies()
    # steps ending before the threshold must not decrease; every other step must be small
    rising = all(S[i + 1] >= S[i] for i in range(len(S) - 1) if d[i + 1] < threshold)
    flat = max(abs(S[i + 1] - S[i]) for i in range(len(S) - 1) if d[i + 1] >= threshold)

    rows = {n: run_sweep(SweepSpec.linear(params, grid, grid, "nonsymmetric", n, 0.0, 100.0, 20)).rows
            for n in (2, 3, 4)}
    spread, at = 0.0, 0.0
    for i, dp1 in enumerate(sym.spec.dp1_values):
        vals = [rows[n][i].entropy_bits for n in rows if rows[n][i].in_window]
        if len(vals) > 1 and max(vals) - min(vals) > spread:
            spread, at = max(vals) - min(vals), dp1
    ok = rising and flat < 0.05 and spread < 0.3
    assert record(5, "saturation & nonsymmetric control", ok,
                  f"rising to {threshold:g}: {rising}, max step beyond {flat:.4f} bits, "
                  f"nonsymmetric spread {spread:.3f} bits at dp1={at:g}")


def test_criterion_6_mode_separation(params, grid):
    ov = {}
    for a in (30, 100):
        res = decompose(build_joint_spectrum(params, pairs((a, 0), (-a, 0)), grid, grid), rank=2)
        ov[a] = mode_overlap(res.signal_modes[:, 0], res.signal_modes[:, 1], grid.weights)
    ok = ov[100] < 0.1 and ov[30] > 0.5
    assert record(6, "mode separation", ok, f"overlap at 100: {ov[100]:.2e}, at 30: {ov[30]:.3f}")


def test_criterion_7_time_domain(params, grid):
    res = decompose(build_joint_spectrum(params, pairs(*SYMMETRIC[3]), grid, grid), rank=2)
    worst = 0.0
    for modes in (res.signal_modes, res.idler_modes):
        tm = to_time(modes, grid)
        p1, p2 = dominant_period(tm, 0), dominant_period(tm, 1)
        worst = max(worst, abs(p1 - p2) / max(p1, p2))
    single = decompose(build_joint_spectrum(params, MultiplexConfig.single(), grid, grid), rank=1)
    rate = tail_decay_rate(to_time(single.idler_modes, grid))
    ok = worst < 0.02 and abs(rate / params.gamma3N - 1) < 0.05
    assert record(7, "time-domain interference", ok,
                  f"pair period mismatch {worst:.1e}, tail rate {rate:.4f} vs {params.gamma3N:g}")


def _commands(cfg):
    if "sweep" in cfg:
        return ["sweep"]
    if "ensembles" in cfg and len(cfg["ensembles"]) == 1 and cfg["ensembles"][0] == {"dp": 0.0, "dq": 0.0}:
        return ["spectrum", "decompose", "timedomain", "verify"]
    return ["spectrum", "decompose", "timedomain"]


def test_criterion_8_determinism(tmp_path):
    names = sorted(f for f in os.listdir(CONFIGS) if f.endswith(".json"))
    mismatched, files = [], 0
    for name in names:
        path = os.path.join(CONFIGS, name)
        with open(path) as fh:
            cmds = _commands(json.load(fh))
        runs = []
        for rep in ("a", "b"):
            out = tmp_path / rep / name[:-5]
            for cmd in cmds:
                assert main([cmd, "--config", path, "--out", str(out), "--plot"]) == 0
            runs.append(out)
        listing = sorted(os.listdir(runs[0]))
        assert listing == sorted(os.listdir(runs[1]))
        _, diff, err = filecmp.cmpfiles(runs[0], runs[1], listing, shallow=False)
        mismatched += [f"{name}:{f}" for f in diff + err]
        files += len(listing)
    ok = not mismatched
    assert record(8, "determinism", ok,
                  f"{len(names)} configs, {files} files" + (f", differing {mismatched}" if mismatched else
                                                              ", all byte-identical"))
