"""Command-line entry point.

    biphoton spectrum   --config cfg.json --out DIR [--plot]
    biphoton decompose  --config cfg.json --out DIR [--rank N] [--plot]
    biphoton timedomain --config cfg.json --out DIR [--plot]
    biphoton sweep      --config cfg.json --out DIR [--threads N] [--plot]
    biphoton verify     --config cfg.json --out DIR

Exit codes: 0 ok, 2 configuration error, 3 numerical error,
4 verification failed.
"""
import argparse
import logging
import os
import sys

import numpy as np

from . import config as config_mod
from . import export, svg
from .errors import ConfigError, NumericalError
from .schmidt import decompose
from .spectral import build_joint_spectrum
from .sweep import SweepSpec, fit_scaling, maximize_entropy, run_sweep
from .timedomain import dominant_period, tail_decay_rate, to_time
from .errors import NoOscillationFound

log = logging.getLogger("biphoton")

EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 2, 3, 4


def _spectrum(rc):
    return build_joint_spectrum(rc.params, rc.multiplex, rc.grid, rc.grid)


def cmd_spectrum(rc, args):
    js = _spectrum(rc)
    export.write_spectrum_csv(os.path.join(args.out, "spectrum.csv"), js)
    export.write_json(os.path.join(args.out, "spectrum.json"), {
        "n_mp": rc.multiplex.n_mp,
        "shifts": [list(s) for s in rc.multiplex.shifts],
        "grid": {"lo": rc.grid.lo, "hi": rc.grid.hi, "n": rc.grid.n, "quadrature": rc.grid.kind},
        "l2_scale": js.scale,
        "normalized": js.normalized,
    })
    if rc.plot:
        svg.heatmap(os.path.join(args.out, "spectrum.svg"), js.intensity(),
                    rc.grid.nodes, rc.grid.nodes, title="|f_MP|^2",
                    xlabel="signal detuning / gamma3", ylabel="idler detuning / gamma3")
    return 0


def cmd_decompose(rc, args):
    js = _spectrum(rc)
    rank = args.rank if args.rank is not None else rc.decompose["rank"]
    res = decompose(js, rank=rank, pair_tol=rc.decompose["pair_tol"])
    export.write_json(os.path.join(args.out, "schmidt.json"), res.to_dict())
    m = min(rc.decompose["mode_rank"], res.rank)
    export.write_modes_csv(os.path.join(args.out, "signal_modes.csv"), rc.grid.nodes, res.signal_modes[:, :m], "psi")
    export.write_modes_csv(os.path.join(args.out, "idler_modes.csv"), rc.grid.nodes, res.idler_modes[:, :m], "phi")
    if rc.plot:
        n = np.arange(1, res.rank + 1)
        svg.line_plot(os.path.join(args.out, "eigenvalues.svg"), [(n, res.eigenvalues, "lambda_n")],
                      title=f"S = {res.entropy_bits:.4f} bits, K = {res.schmidt_number:.4f}",
                      xlabel="n", ylabel="lambda_n", logy=True, markers=True)
        for side, modes in (("signal", res.signal_modes), ("idler", res.idler_modes)):
            svg.line_plot(os.path.join(args.out, f"{side}_modes.svg"),
                          [(rc.grid.nodes, np.abs(modes[:, k]) ** 2, f"mode {k + 1}") for k in range(m)],
                          title=f"{side} mode densities", xlabel="detuning / gamma3", ylabel="|mode|^2")
    return 0


def cmd_timedomain(rc, args):
    js = _spectrum(rc)
    td = rc.timedomain
    res = decompose(js, rank=min(td["modes"], rc.grid.n))
    t_start = td["t_start"] if td["t_start"] is not None else -2.0 * rc.params.tau
    summary = {}
    for side, modes in (("signal", res.signal_modes), ("idler", res.idler_modes)):
        tm = to_time(modes, rc.grid, t_start=t_start, duration=td["duration"], n_t=td["n_t"], side=side)
        export.write_time_csv(os.path.join(args.out, f"time_{side}.csv"), tm)
        info = []
        for k in range(tm.n_modes):
            try:
                period = dominant_period(tm, k)
            except NoOscillationFound:
                period = None
            try:
                rate = tail_decay_rate(tm, k)
            except NoOscillationFound:
                rate = None
            info.append({"mode": k + 1, "norm": float(tm.norms()[k]), "period": period, "tail_rate": rate})
        summary[side] = info
        if rc.plot:
            svg.line_plot(os.path.join(args.out, f"time_{side}.svg"),
                          [(tm.times, tm.density(k), f"mode {k + 1}") for k in range(tm.n_modes)],
                          title=f"{side} mode densities in time", xlabel="t * gamma3", ylabel="|mode(t)|^2")
    summary["eigenvalues"] = [float(v) for v in res.eigenvalues]
    export.write_json(os.path.join(args.out, "timedomain.json"), summary)
    return 0


def cmd_sweep(rc, args):
    sw = rc.sweep
    for n_mp in sw["n_mp"]:
        # validates steps and family before any heavy work
        SweepSpec.linear(rc.params, rc.grid, rc.grid, sw["family"], n_mp,
                         sw["dp1_start"], sw["dp1_stop"], sw["steps"])
    series = []
    for n_mp in sw["n_mp"]:
        spec = SweepSpec.linear(rc.params, rc.grid, rc.grid, sw["family"], n_mp,
                                sw["dp1_start"], sw["dp1_stop"], sw["steps"])
        log.info("sweep %s N_MP=%d over %d points", sw["family"], n_mp, len(spec.dp1_values))
        result = run_sweep(spec, workers=args.threads)
        export.write_sweep_csv(os.path.join(args.out, f"sweep_{sw['family']}_N{n_mp}.csv"), result)
        series.append((result.dp1(False), result.entropies(False), f"N_MP={n_mp}"))
    if rc.plot:
        svg.line_plot(os.path.join(args.out, f"sweep_{sw['family']}.svg"), series,
                      title=f"entropy vs dp1 ({sw['family']})", xlabel="dp1 / gamma3",
                      ylabel="S (bits)", markers=True)
    if sw["maximize"]:
        opts = []
        for n_mp in sw["n_mp"]:
            log.info("maximizing entropy for N_MP=%d", n_mp)
            opts.append(maximize_entropy(sw["family"], n_mp, sw["bounds"], rc.params, rc.grid, rc.grid,
                                         sw["rounds"], sw["tol"]))
        fit = fit_scaling([o.n_mp for o in opts], [o.entropy_bits for o in opts],
                          [o.schmidt_number for o in opts])
        out = fit.to_dict()
        out["optima"] = [{"n_mp": o.n_mp, "magnitudes": list(o.magnitudes),
                          "shifts": [list(s) for s in o.config.shifts],
                          "S_M": o.entropy_bits, "K_M": o.schmidt_number,
                          "evaluations": o.evaluations} for o in opts]
        export.write_json(os.path.join(args.out, "scaling.json"), out)
        if rc.plot:
            n = np.array(fit.n_mp, dtype=float)
            svg.line_plot(os.path.join(args.out, "scaling.svg"),
                          [(n, np.array(fit.entropy_max), "S_M"),
                           (n, np.array(fit.schmidt_max), "K_M"),
                           (n, fit.entropy_max[0] + np.log2(n), "S_1 + log2 N")],
                          title="maximum entropy and Schmidt number", xlabel="N_MP", ylabel="value",
                          markers=True)
    return 0


def cmd_verify(rc, args):
    from .verify import run_verification
    report = run_verification(rc)
    export.write_json(os.path.join(args.out, "verify.json"), report)
    print(report["status"])
    for c in report["checks"]:
        print(f"  {'PASS' if c['pass'] else 'FAIL'} {c['name']}: {c['value']:.3e} {c['op']} {c['threshold']:.1e}")
    return 0 if report["status"] == "pass" else EXIT_VERIFY


COMMANDS = {
    "spectrum": cmd_spectrum,
    "decompose": cmd_decompose,
    "timedomain": cmd_timedomain,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="biphoton", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--rank", type=int, default=None, help="Schmidt truncation rank")
        p.add_argument("--threads", type=int, default=1, help="worker cap for sweeps")
        p.add_argument("--plot", action="store_true", help="also write SVG plots")
        p.add_argument("--print-config", action="store_true",
                       help="print the fully defaulted configuration and exit")
    return parser


def _setup_logging():
    level = os.environ.get("BIPHOTON_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        rc = config_mod.load(args.config) if args.config else None
        if args.print_config:
            sys.stdout.write((rc or config_mod.defaults()).dumps())
            return 0
        if rc is None:
            raise ConfigError("--config is required")
        if args.plot:
            rc.raw["plot"] = True
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.rank is not None and not 1 <= args.rank <= rc.grid.n:
            raise ConfigError(f"--rank must be in [1, {rc.grid.n}], got {args.rank}")
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](rc, args)
    except ConfigError as exc:
        print(f"biphoton: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"biphoton: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
