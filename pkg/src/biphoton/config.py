"""JSON run configuration: parsing, defaults and validation."""
import copy
import json
from dataclasses import dataclass
import math

from .dynamics import DriveParams
from .errors import ConfigError
from .spectral import FrequencyGrid, MultiplexConfig, PhysicalParams

REQUIRED = ("gamma3N", "tau")

DEFAULTS = {
    "gamma3N": 5.0,
    "tau": 0.25,
    "grid": {"lo": -300.0, "hi": 300.0, "n": 1024, "quadrature": "trapezoid"},
    "ensembles": [{"dp": 0.0, "dq": 0.0}],
    "decompose": {"rank": 16, "pair_tol": 0.01, "mode_rank": 4},
    "timedomain": {"modes": 4, "t_start": None, "duration": None, "n_t": None},
    "sweep": {
        "family": "symmetric",
        "n_mp": [2],
        "dp1_start": 0.0,
        "dp1_stop": 100.0,
        "steps": 20,
        "maximize": False,
        "bounds": [0.0, 100.0],
        "rounds": 2,
        "tol": 0.5,
    },
    "verify": {
        "omega_a_area": 0.1,
        "omega_b_area": 0.1,
        "delta1": 200.0,
        "delta2": 200.0,
        "points": 11,
        "span": 20.0,
        "dt": 0.001,
        "tolerance": 1e-5,
    },
    "plot": False,
}

_ENSEMBLE_KEYS = {"dp", "dq", "weight"}


def _number(value, where, integer=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{where}': expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"field '{where}': must be finite")
    if integer:
        if int(value) != value:
            raise ConfigError(f"field '{where}': expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _merge(defaults, given, path):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"field '{where}': unknown key")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"field '{where}': expected an object")
            out[key] = _merge(defaults[key], value, where)
        else:
            out[key] = value
    return out


def _ensembles(items):
    if not isinstance(items, list) or not items:
        raise ConfigError("field 'ensembles': expected a non-empty list")
    shifts, weights = [], []
    for i, item in enumerate(items):
        where = f"ensembles[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(f"field '{where}': expected an object")
        extra = set(item) - _ENSEMBLE_KEYS
        if extra:
            raise ConfigError(f"field '{where}.{sorted(extra)[0]}': unknown key")
        for key in ("dp", "dq"):
            if key not in item:
                raise ConfigError(f"field '{where}.{key}': missing")
        dp = _number(item["dp"], f"{where}.dp")
        dq = _number(item["dq"], f"{where}.dq")
        w = item.get("weight", 1.0)
        if isinstance(w, list):
            if len(w) != 2:
                raise ConfigError(f"field '{where}.weight': expected [re, im]")
            w = complex(_number(w[0], f"{where}.weight[0]"), _number(w[1], f"{where}.weight[1]"))
        else:
            w = complex(_number(w, f"{where}.weight"))
        shifts.append((dp, dq))
        weights.append(w)
    return MultiplexConfig(tuple(shifts), tuple(weights))


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    params: PhysicalParams
    grid: FrequencyGrid
    multiplex: MultiplexConfig
    drive: DriveParams

    @property
    def decompose(self):
        return self.raw["decompose"]

    @property
    def timedomain(self):
        return self.raw["timedomain"]

    @property
    def sweep(self):
        return self.raw["sweep"]

    @property
    def verify(self):
        return self.raw["verify"]

    @property
    def plot(self):
        return bool(self.raw["plot"])

    def dumps(self):
        return json.dumps(self.raw, indent=2) + "\n"


def from_dict(given, require=True):
    if not isinstance(given, dict):
        raise ConfigError("configuration must be a JSON object")
    if require:
        for key in REQUIRED:
            if key not in given:
                raise ConfigError(f"field '{key}': missing (required)")
    raw = _merge(DEFAULTS, given, "")

    raw["gamma3N"] = _number(raw["gamma3N"], "gamma3N")
    raw["tau"] = _number(raw["tau"], "tau")
    g = raw["grid"]
    g["lo"] = _number(g["lo"], "grid.lo")
    g["hi"] = _number(g["hi"], "grid.hi")
    g["n"] = _number(g["n"], "grid.n", integer=True)
    if g["quadrature"] not in ("trapezoid", "gauss"):
        raise ConfigError(f"field 'grid.quadrature': expected 'trapezoid' or 'gauss', got {g['quadrature']!r}")

    d = raw["decompose"]
    d["rank"] = _number(d["rank"], "decompose.rank", integer=True)
    d["pair_tol"] = _number(d["pair_tol"], "decompose.pair_tol")
    d["mode_rank"] = _number(d["mode_rank"], "decompose.mode_rank", integer=True)
    if d["rank"] < 1 or d["mode_rank"] < 1:
        raise ConfigError("field 'decompose.rank': must be >= 1")

    t = raw["timedomain"]
    t["modes"] = _number(t["modes"], "timedomain.modes", integer=True)
    t["t_start"] = _number(t["t_start"], "timedomain.t_start", allow_none=True)
    t["duration"] = _number(t["duration"], "timedomain.duration", allow_none=True)
    t["n_t"] = _number(t["n_t"], "timedomain.n_t", integer=True, allow_none=True)

    s = raw["sweep"]
    if s["family"] not in ("symmetric", "nonsymmetric"):
        raise ConfigError(f"field 'sweep.family': expected 'symmetric' or 'nonsymmetric', got {s['family']!r}")
    if not isinstance(s["n_mp"], list) or not s["n_mp"]:
        raise ConfigError("field 'sweep.n_mp': expected a non-empty list of integers")
    s["n_mp"] = [_number(v, "sweep.n_mp", integer=True) for v in s["n_mp"]]
    if min(s["n_mp"]) < 1:
        raise ConfigError("field 'sweep.n_mp': counts must be >= 1")
    s["dp1_start"] = _number(s["dp1_start"], "sweep.dp1_start")
    s["dp1_stop"] = _number(s["dp1_stop"], "sweep.dp1_stop")
    s["steps"] = _number(s["steps"], "sweep.steps", integer=True)
    if s["steps"] < 1:
        raise ConfigError(f"field 'sweep.steps': must be >= 1, got {s['steps']}")
    if not isinstance(s["maximize"], bool):
        raise ConfigError("field 'sweep.maximize': expected true or false")
    if not isinstance(s["bounds"], list) or len(s["bounds"]) != 2:
        raise ConfigError("field 'sweep.bounds': expected [lo, hi]")
    s["bounds"] = [_number(v, "sweep.bounds") for v in s["bounds"]]
    s["rounds"] = _number(s["rounds"], "sweep.rounds", integer=True)
    s["tol"] = _number(s["tol"], "sweep.tol")

    v = raw["verify"]
    for key in ("omega_a_area", "omega_b_area", "delta1", "delta2", "span", "dt", "tolerance"):
        v[key] = _number(v[key], f"verify.{key}")
    v["points"] = _number(v["points"], "verify.points", integer=True)

    if not isinstance(raw["plot"], bool):
        raise ConfigError("field 'plot': expected true or false")

    params = PhysicalParams(raw["gamma3N"], raw["tau"])
    grid = FrequencyGrid.from_spec(g["lo"], g["hi"], g["n"], g["quadrature"])
    mp = _ensembles(raw["ensembles"])
    raw["ensembles"] = [
        {"dp": dp, "dq": dq} if w == 1 else {"dp": dp, "dq": dq, "weight": [w.real, w.imag]}
        for (dp, dq), w in zip(mp.shifts, mp.weights)]
    drive = DriveParams(v["omega_a_area"], v["omega_b_area"], v["delta1"], v["delta2"], raw["tau"])
    return RunConfig(raw, params, grid, mp, drive)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        given = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    try:
        return from_dict(given)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def defaults():
    return from_dict({}, require=False)
