"""JSON run configuration: problem family, grid, solver, sweep and output sections.

Problem keys may sit at the top level or under "problem". Unknown keys are
rejected everywhere.
"""
import json
import math

from .errors import ConfigError
from .grid import make_grid
from .problem import auto_b, custom, example_1_1, example_1_2, finite_well

SECTIONS = ("problem", "grid", "solver", "sweep", "output")

_COMMON = {"family", "alpha", "p", "lambda"}
FAMILY_KEYS = {
    "example_1_1": _COMMON | {"b", "beta"},
    "example_1_2": _COMMON | {"b"},
    "finite_well": _COMMON | {"V0", "a_well", "q0"},
    "custom": _COMMON | {"r", "V", "Q", "theta", "a", "V_inf"},
}
GRID_DEFAULTS = {"r_max": 100.0, "n": 10000}
SOLVER_DEFAULTS = {"k": "auto", "tol": 1e-10, "max_iter": 500}
SWEEP_DEFAULTS = {"J": 5, "ladder": None}
OUTPUT_DEFAULTS = {"directory": ".", "emit_svg": False}


def _reject_unknown(section, data, allowed):
    extra = sorted(set(data) - set(allowed))
    if extra:
        names = ", ".join(repr(f"{section}.{k}") for k in extra)
        raise ConfigError(f"unknown key {names}")


def _number(section, key, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    if integer:
        if float(value) != int(value):
            raise ConfigError(f"{section}.{key} must be an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be finite, got {value!r}")
    return float(value)


def _section(raw, name, defaults):
    data = raw.get(name, {})
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be an object")
    _reject_unknown(name, data, defaults)
    out = dict(defaults)
    out.update(data)
    return out


def _grid(raw):
    g = _section(raw, "grid", GRID_DEFAULTS)
    r_max = _number("grid", "r_max", g["r_max"])
    n = _number("grid", "n", g["n"], integer=True)
    if r_max <= 0:
        raise ConfigError("grid.r_max must be positive")
    if n < 16 or n % 2:
        raise ConfigError("grid.n must be an even integer >= 16")
    return make_grid(r_max, n)


def _solver(raw):
    s = _section(raw, "solver", SOLVER_DEFAULTS)
    k = s["k"]
    if k != "auto":
        k = _number("solver", "k", k)
        if k <= 0:
            raise ConfigError("solver.k must be positive or \"auto\"")
    tol = _number("solver", "tol", s["tol"])
    if tol <= 0:
        raise ConfigError("solver.tol must be positive")
    max_iter = _number("solver", "max_iter", s["max_iter"], integer=True)
    if max_iter < 1:
        raise ConfigError("solver.max_iter must be at least 1")
    return {"k": None if k == "auto" else k, "tol": tol, "max_iter": max_iter}


def _sweep(raw):
    s = _section(raw, "sweep", SWEEP_DEFAULTS)
    J = _number("sweep", "J", s["J"], integer=True)
    if J < 1:
        raise ConfigError("sweep.J must be at least 1")
    ladder = s["ladder"]
    if ladder is not None:
        if not isinstance(ladder, list) or not ladder:
            raise ConfigError("sweep.ladder must be a nonempty list of numbers")
        ladder = [_number("sweep", "ladder", v) for v in ladder]
        if any(v < 0 for v in ladder):
            raise ConfigError("sweep.ladder values must be nonnegative")
        if 0.0 not in ladder:
            raise ConfigError("sweep.ladder must contain 0")
    return {"J": J, "ladder": ladder}


def _output(raw):
    o = _section(raw, "output", OUTPUT_DEFAULTS)
    if not isinstance(o["directory"], str):
        raise ConfigError("output.directory must be a string")
    if not isinstance(o["emit_svg"], bool):
        raise ConfigError("output.emit_svg must be true or false")
    return o


def _problem(data, grid):
    family = data.get("family")
    if family not in FAMILY_KEYS:
        raise ConfigError(f"problem.family must be one of {sorted(FAMILY_KEYS)}, got {family!r}")
    _reject_unknown("problem", data, FAMILY_KEYS[family])
    for key in ("alpha", "p"):
        if key not in data:
            raise ConfigError(f"problem.{key} is required")
    kw = {k: v for k, v in data.items() if k not in ("family", "lambda", "r", "V", "Q")}
    for key, value in kw.items():
        if not (key == "b" and value == "auto"):
            kw[key] = _number("problem", key, value)
    lam = _number("problem", "lambda", data.get("lambda", 0.0))
    try:
        if family in ("example_1_1", "example_1_2"):
            if kw.get("b", "auto") == "auto":
                if not kw["alpha"] > 0.75:
                    raise ValueError(f"alpha must exceed 3/4, got {kw['alpha']!r}")
                kw["b"] = auto_b(kw["alpha"], grid)
            build = example_1_1 if family == "example_1_1" else example_1_2
            return build(lam=lam, **kw)
        if family == "finite_well":
            return finite_well(lam=lam, **kw)
        samples = []
        for key in ("r", "V", "Q"):
            vals = data.get(key)
            if not isinstance(vals, list) or len(vals) < 2:
                raise ConfigError(f"problem.{key} must be a list of at least two numbers")
            samples.append([_number("problem", key, v) for v in vals])
        return custom(kw.pop("alpha"), kw.pop("p"), *samples, lam=lam, **kw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(raw):
    """Validate an already-decoded config object; returns (spec, grid, options)."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    flat = {k: v for k, v in raw.items() if k not in SECTIONS}
    if flat and "problem" in raw:
        raise ConfigError(f"problem keys given both at top level and under \"problem\": {sorted(flat)}")
    unknown = sorted(set(flat) - set().union(*FAMILY_KEYS.values()))
    if unknown:
        raise ConfigError("unknown key " + ", ".join(map(repr, unknown)))
    problem = raw["problem"] if "problem" in raw else flat
    if not isinstance(problem, dict):
        raise ConfigError("section 'problem' must be an object")
    grid = _grid(raw)
    spec = _problem(problem, grid)
    options = {"solver": _solver(raw), "sweep": _sweep(raw), "output": _output(raw)}
    return spec, grid, options


def load_problem(path):
    """Read and validate a JSON config file.

    OSError propagates for unreadable files; malformed JSON and invalid values
    raise ConfigError naming the line or key.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)
