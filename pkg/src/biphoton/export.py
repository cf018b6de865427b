"""CSV and JSON writers. Floats are written with 17 significant digits."""
import json

import numpy as np

FMT = "%.17g"


def _fmt(v):
    return FMT % v


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def _write_table(path, header, columns):
    data = np.column_stack(columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        np.savetxt(fh, data, fmt=FMT, delimiter=",")


def write_spectrum_csv(path, js):
    """Rows ``dws,dwi,re,im,abs2`` in row-major (signal, idler) order."""
    ns, ni = js.amplitude.shape
    S = np.repeat(np.asarray(js.signal_grid.nodes), ni)
    I = np.tile(np.asarray(js.idler_grid.nodes), ns)
    a = np.asarray(js.amplitude).ravel()
    _write_table(path, "dws,dwi,re,im,abs2", [S, I, a.real, a.imag, np.abs(a) ** 2])


def write_modes_csv(path, omega, modes, prefix):
    cols = [np.asarray(omega)]
    names = ["omega"]
    for n in range(modes.shape[1]):
        cols += [modes[:, n].real, modes[:, n].imag]
        names += [f"re_{prefix}_{n + 1}", f"im_{prefix}_{n + 1}"]
    _write_table(path, ",".join(names), cols)


def write_time_csv(path, tm):
    cols = [tm.times] + [tm.density(k) for k in range(tm.n_modes)]
    names = ["t"] + [f"abs2_mode{k + 1}" for k in range(tm.n_modes)]
    _write_table(path, ",".join(names), cols)


def write_sweep_csv(path, result):
    names = ["dp1", "S_bits", "K"] + [f"lambda{k}" for k in range(1, 9)] + ["in_window"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for r in result.rows:
            vals = [r.dp1, r.entropy_bits, r.schmidt_number, *r.eigenvalues]
            fh.write(",".join(_fmt(v) for v in vals) + "," + ("1" if r.in_window else "0") + "\n")


def read_spectrum_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data
