"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import time

import numpy as np

from biphoton import kernels
from biphoton.spectral import FrequencyGrid


def _cases():
    g = FrequencyGrid.uniform(-300.0, 300.0, 1024)
    ws, wi = np.ascontiguousarray(g.nodes), np.ascontiguousarray(g.nodes)
    rng = np.random.default_rng(0)
    coeffs = np.ascontiguousarray(rng.standard_normal((1024, 4)) + 1j * rng.standard_normal((1024, 4)))
    dp, dq = np.array([30.0, -30.0]), np.zeros(2)
    wt = np.ones(2, dtype=complex)
    times = np.linspace(-0.5, 10.0, 2048)
    t = np.arange(-1.5, 1.5, 1e-3)
    x, w = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(-1.5, 2 * math.log(1e10) / 5.0, 300)
    return {
        "jsa_fill 1024x1024": lambda be: be.jsa_fill(ws, wi, dp, dq, wt, 5.0, 0.25),
        "quad_dft 1024->2048 x4": lambda be: be.quad_dft(coeffs, ws, times, -1.0),
        "rk4_three_level 3000 steps": lambda be: be.rk4_three_level(t, 0.1, 0.1, 200.0, 200.0, 0.25),
        "dsi_double_integral": lambda be: be.dsi_double_integral(edges, x, w, 1e-6, 0.25, 5.0, 3.0, -2.0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"{'kernel':30s}" + "".join(f"{b:>12s}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, run in _cases().items():
        best = []
        for b in backends:
            be = kernels.get_backend(b)
            run(be)  # warm up
            ts = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                run(be)
                ts.append(time.perf_counter() - t0)
            best.append(min(ts))
        line = f"{name:30s}" + "".join(f"{v * 1e3:10.2f}ms" for v in best)
        if len(best) > 1:
            line += f"   {best[1] / best[0]:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
