"""Oracle and invariant checks bundled into one pass/fail report."""
import numpy as np

from .dynamics import oracle_report
from .schmidt import decompose, entropy, inner_products, kernel_eigenvalues
from .spectral import MultiplexConfig, build_joint_spectrum, eval_multiplexed, eval_single


def _check(name, value, threshold, op="<"):
    ok = value < threshold if op == "<" else value > threshold
    return {"name": name, "value": float(value), "threshold": float(threshold), "op": op, "pass": bool(ok)}


def run_verification(rc):
    v = rc.verify
    checks = []

    oracle = oracle_report(rc.params, rc.drive, span=v["span"], points=v["points"], dt=v["dt"])
    checks.append(_check("oracle_pointwise_relative", oracle["max_pointwise_relative"], v["tolerance"]))
    checks.append(_check("oracle_normalized_linf", oracle["max_normalized_abs_deviation"], v["tolerance"]))
    checks.append(_check("adiabatic_upper_state", oracle["adiabatic_deviation"], 0.05))
    checks.append(_check("ground_population_min", oracle["min_ground_population"], 0.99, op=">"))

    axis = np.linspace(-50.0, 50.0, 41)
    single = eval_multiplexed(rc.params, MultiplexConfig.single(), axis[:, None], axis[None, :])
    ref = eval_single(rc.params, axis[:, None], axis[None, :])
    checks.append(_check("single_ensemble_reduction", np.max(np.abs(single - ref)), 1e-15))

    js = build_joint_spectrum(rc.params, rc.multiplex, rc.grid, rc.grid)
    res = decompose(js)
    lam = res.all_eigenvalues
    checks.append(_check("eigenvalue_sum", abs(lam.sum() - 1.0), 1e-10))
    r = res.rank
    eye = np.eye(r)
    checks.append(_check("signal_orthonormality",
                         np.max(np.abs(inner_products(res.signal_modes, rc.grid.weights) - eye)), 1e-8))
    checks.append(_check("idler_orthonormality",
                         np.max(np.abs(inner_products(res.idler_modes, rc.grid.weights) - eye)), 1e-8))
    checks.append(_check("full_rank_reconstruction", res.reconstruction_error, 1e-8))
    k1 = entropy(kernel_eigenvalues(js, "signal"))
    k2 = entropy(kernel_eigenvalues(js, "idler"))
    checks.append(_check("kernel_entropy_signal_vs_idler", abs(k1 - k2), 1e-8))
    checks.append(_check("kernel_vs_svd_entropy", abs(k1 - res.entropy_bits), 1e-8))
    checks.append(_check("schmidt_number_le_2^S", res.schmidt_number - 2.0 ** res.entropy_bits, 1e-9))

    passed = all(c["pass"] for c in checks)
    return {
        "status": "pass" if passed else "fail",
        "checks": checks,
        "oracle": oracle,
        "entropy_bits": res.entropy_bits,
        "schmidt_number": res.schmidt_number,
    }
