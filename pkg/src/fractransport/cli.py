"""Command-line front end.

Subcommands ``green``, ``solve``, ``frame``, ``frac-deriv``, ``mc`` and
``validate``. Parameters come from built-in defaults, then an optional JSON
config file (``--config``), then command-line flags. The merged document is
validated against a schema before anything is computed and is embedded in
every output file.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error,
3 numerical failure. Output is assembled in memory and written in one step,
so a failed run never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

import jsonschema
import numpy as np

from . import __version__
from ._quad import QuadratureError
from .fracderiv import SampledFunction, riesz_derivative, spectral_derivative
from .frame import ShockParams, solution_shock, weak_shock
from .series import SeriesDivergenceError, TruncationPolicy, green_series, solution_series
from .spectral import (StabilityError, SymbolFamily, TransportParams,
                       green_quadrature, solution_quadrature, solution_time_integral)
from .specfun import HypergeometricError
from .stochastic import EnsembleSpec, sample_source_positions, simulate_ensemble
from .validation import METHODS, SUBSETS, run_checks
from .weakdiff import f_weak

FORMAT_VERSION = 1
COLUMNS = ("x", "value", "err_estimate", "n_terms", "mode")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

GREEN_METHODS = ("quadrature", "series", "mc")
SOLVE_METHODS = ("quadrature", "time-integral", "series", "weak", "mc")
FRAME_METHODS = ("series", "printed", "weak", "weak-printed")
DERIV_METHODS = ("spectral", "quadrature")
TEST_FUNCTIONS = {
    "gaussian": lambda x: np.exp(-x * x),
    "sech": lambda x: 1.0 / np.cosh(x),
    "gabor": lambda x: np.exp(-0.5 * x * x) * np.cos(2.0 * x),
    "bump4": lambda x: np.exp(-(x**4) / 4.0),
    "dgauss": lambda x: x * np.exp(-x * x),
}
FAMILIES = ("Riesz", "OneSidedRight", "OneSidedLeft", "Glued")

DEFAULTS = {
    "lambda": 1.5,
    "kappa": 0.1,
    "a": 0.0,
    "t": 1.0,
    "x_min": -5.0,
    "x_max": 5.0,
    "n": 101,
    "format": "csv",
    "seed": 20240607,
    "tol": 1e-12,
    "n_max": 200,
    "n_walkers": 1_000_000,
    "v_sh": 1.0,
    "t0": 0.0,
    "order": 1.5,
    "function": "gaussian",
    "workers": 1,
    "skip_failed": False,
}

COMMAND_DEFAULTS = {
    "green": {"method": "quadrature", "family": "Riesz"},
    "solve": {"method": "quadrature", "family": "Glued", "a": 1.0},
    "frame": {"method": "series", "family": "Glued", "x_min": 0.0, "x_max": 5.0, "kappa": 0.05},
    "frac-deriv": {"method": "spectral", "family": "OneSidedRight", "x_min": -16.0,
                   "x_max": 16.0, "n": 512},
    "mc": {"method": "mc", "family": "Riesz", "n": 201, "x_min": -10.0, "x_max": 10.0},
    "validate": {},
}

_NUM = {"type": "number"}
SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "command": {"enum": list(COMMAND_DEFAULTS)},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "maximum": 2},
        "kappa": {"type": "number", "minimum": 0},
        "a": _NUM,
        "t": {"type": "number", "exclusiveMinimum": 0},
        "x_min": _NUM,
        "x_max": _NUM,
        "n": {"type": "integer", "minimum": 1, "maximum": 1_000_000},
        "method": {"type": "string"},
        "family": {"enum": list(FAMILIES)},
        "format": {"enum": ["csv", "json"]},
        "out": {"type": ["string", "null"]},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "n_max": {"type": "integer", "minimum": 1},
        "n_walkers": {"type": "integer", "minimum": 1},
        "v_sh": {"type": "number", "exclusiveMinimum": 0},
        "t0": {"type": "number", "minimum": 0},
        "order": _NUM,
        "function": {"enum": list(TEST_FUNCTIONS)},
        "compare": {"type": ["string", "null"]},
        "workers": {"type": "integer", "minimum": 1},
        "skip_failed": {"type": "boolean"},
        "subset": {"type": "array", "items": {"enum": list(SUBSETS)}},
        "perturb_method": {"type": ["string", "null"], "enum": [None, *METHODS]},
        "perturb_kappa": {"type": "number", "exclusiveMinimum": 0},
    },
}


class ConfigError(ValueError):
    pass


class NumericalFailure(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# configuration


def _flag(name):
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fractransport",
                                     description="Fractional diffusion-advection transport profiles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMAND_DEFAULTS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="JSON config file; flags override its keys")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        if name == "validate":
            p.add_argument("--subset", action="append", default=None,
                           help=f"restrict to a module ({', '.join(SUBSETS)}); repeatable")
            p.add_argument("--perturb-method", choices=METHODS, default=None,
                           help="scale kappa inside one method (fault injection)")
            p.add_argument("--perturb-kappa", type=float, default=None)
            p.add_argument("--n-walkers", type=int, default=None)
            continue
        for key in ("lambda", "kappa", "a", "t", "x_min", "x_max", "tol"):
            p.add_argument(_flag(key), dest=key, type=float, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--method", default=None)
        p.add_argument("--family", default=None)
        p.add_argument("--compare", default=None, metavar="METHOD",
                       help="append reference and abs_diff columns from a second method")
        p.add_argument("--skip-failed", dest="skip_failed", action="store_true", default=None,
                       help="drop points where the method fails instead of exiting with code 3")
        if name in ("mc", "green", "solve"):
            p.add_argument("--n-walkers", dest="n_walkers", type=int, default=None)
        if name == "frame":
            p.add_argument("--v-sh", dest="v_sh", type=float, default=None)
            p.add_argument("--t0", type=float, default=None)
        if name == "frac-deriv":
            p.add_argument("--order", type=float, default=None)
            p.add_argument("--function", choices=list(TEST_FUNCTIONS), default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags; then schema validation."""
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        if loaded.get("command", args.command) != args.command:
            raise ConfigError(f"config is for {loaded['command']!r}, not {args.command!r}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in ("config",) or value is None:
            continue
        cfg[key] = value
    cfg["command"] = args.command
    if "family" in cfg:
        try:
            cfg["family"] = _family_name(cfg["family"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "config"
        raise ConfigError(f"{path}: {exc.message}") from exc
    _check_semantics(cfg)
    return cfg


def _family_name(value):
    if str(value).lower() == "glued":
        return "Glued"
    return SymbolFamily.parse(value).value


def _check_semantics(cfg):
    command = cfg["command"]
    if command == "validate":
        return
    allowed = {"green": GREEN_METHODS, "solve": SOLVE_METHODS, "frame": FRAME_METHODS,
               "frac-deriv": DERIV_METHODS, "mc": ("mc",)}[command]
    for key in ("method", "compare"):
        if cfg.get(key) is not None and cfg[key] not in allowed:
            raise ConfigError(f"{key} must be one of {', '.join(allowed)} for {command}")
    if cfg["x_max"] < cfg["x_min"] or (cfg["n"] > 1 and cfg["x_max"] == cfg["x_min"]):
        raise ConfigError("need x_min < x_max (or n = 1)")
    if command == "green" and cfg["family"] == "Glued":
        raise ConfigError("green needs a single family")
    if command in ("green", "solve") and cfg["family"] == "Riesz" and "series" in (
            cfg.get("method"), cfg.get("compare")):
        raise ConfigError("series solutions exist for the one-sided families only")
    if command == "frac-deriv" and cfg["method"] == "spectral":
        n = cfg["n"]
        if n < 16 or n & (n - 1):
            raise ConfigError("spectral derivatives need n a power of two, at least 16")
    try:
        TransportParams(cfg["lambda"], cfg["kappa"], cfg["a"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# --------------------------------------------------------------------------
# evaluation


def _params(cfg):
    return TransportParams(cfg["lambda"], cfg["kappa"], cfg["a"])


def _family_at(cfg, x):
    if cfg["family"] == "Glued":
        return SymbolFamily.ONE_SIDED_RIGHT if x > 0.0 else SymbolFamily.ONE_SIDED_LEFT
    return SymbolFamily.parse(cfg["family"])


def _grid(cfg):
    if cfg["command"] == "frac-deriv" and cfg["method"] == "spectral":
        n = cfg["n"]
        return cfg["x_min"] + (cfg["x_max"] - cfg["x_min"]) * np.arange(n) / n
    if cfg["n"] == 1:
        return np.array([float(cfg["x_min"])])
    return np.linspace(cfg["x_min"], cfg["x_max"], cfg["n"])


def _point(cfg, method, x):
    """``(value, err_estimate, n_terms, mode)`` at one abscissa."""
    p = _params(cfg)
    t = cfg["t"]
    command = cfg["command"]
    policy = TruncationPolicy(cfg["tol"], cfg["n_max"])
    fam = _family_at(cfg, x)
    if command == "green":
        if method == "quadrature":
            r = green_quadrature(fam, p, x, t)
            return r.value, r.abs_err_estimate, 0, "quadrature"
        if fam is SymbolFamily.RIESZ:
            raise ValueError("no series for the symmetric family")
        r = green_series(fam, p, x, t, policy)
        return r.value, r.err_estimate, r.n_used, r.mode.value
    if command == "solve":
        if method == "quadrature":
            r = solution_quadrature(fam, p, x, t)
            return r.value, r.abs_err_estimate, 0, "quadrature"
        if method == "time-integral":
            r = solution_time_integral(fam, p, x, t)
            return r.value, r.abs_err_estimate, 0, "time-integral"
        if method == "series":
            r = solution_series(fam, p, x, t, policy)
            return r.value, r.err_estimate, r.n_used, r.mode.value
        return f_weak(p, x, t), 0.0, 2, "weak"
    if command == "frame":
        sp = ShockParams(cfg["v_sh"], cfg["t0"], p)
        if method in ("series", "printed"):
            form = "composed" if method == "series" else "printed"
            r = solution_shock(sp, x, t, policy, form=form)
            return r.value, r.err_estimate, r.n_used, r.mode.value
        form = "composed" if method == "weak" else "printed"
        return weak_shock(sp, x, t, form=form), 0.0, 2, "weak"
    if command == "frac-deriv":
        r = riesz_derivative(TEST_FUNCTIONS[cfg["function"]], cfg["order"], x)
        return r.value, r.abs_err_estimate, 0, "quadrature"
    raise AssertionError(command)


_FAILURES = (QuadratureError, SeriesDivergenceError, HypergeometricError, ArithmeticError)


def _point_job(job):
    cfg, method, x = job
    try:
        return ("ok", _point(cfg, method, x))
    except StabilityError as exc:
        return ("config", str(exc))
    except ValueError as exc:
        # the method has no point value here (source, front, excluded line)
        return ("excluded", str(exc))
    except _FAILURES as exc:
        return ("failed", f"{type(exc).__name__}: {exc}")


def _evaluate(cfg, method, grid):
    jobs = [(cfg, method, float(x)) for x in grid]
    if cfg["workers"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg["workers"]) as pool:
            return list(pool.map(_point_job, jobs, chunksize=max(1, len(jobs) // (4 * cfg["workers"]))))
    return [_point_job(job) for job in jobs]


def _mc_rows(cfg, grid, solve):
    """Histogram density at the grid points (bins one grid spacing wide)."""
    p = _params(cfg)
    fam = _family_at(cfg, 1.0) if cfg["family"] != "Glued" else None
    if fam is None:
        raise ConfigError("Monte Carlo needs a single family")
    width = float(grid[1] - grid[0]) if grid.size > 1 else 0.1
    n = cfg["n_walkers"]
    if solve:
        samples = sample_source_positions(p, fam, cfg["t"], n, cfg["seed"], cfg["workers"])
        weight = cfg["t"]
    else:
        ens = simulate_ensemble(p, fam, EnsembleSpec(n, cfg["seed"], (cfg["t"],)), cfg["workers"])
        samples = ens.positions[0]
        weight = 1.0
    edges = np.concatenate([grid - 0.5 * width, [grid[-1] + 0.5 * width]])
    counts, _ = np.histogram(samples, bins=edges)
    prob = counts / n
    value = weight * prob / width
    err = weight * np.sqrt(prob * (1.0 - prob) / n) / width
    return [("ok", (float(v), float(e), int(c), "mc")) for v, e, c in zip(value, err, counts)]


def _spectral_rows(cfg, grid):
    f = SampledFunction(grid, TEST_FUNCTIONS[cfg["function"]](grid))
    fam = _family_at(cfg, 1.0) if cfg["family"] != "Glued" else SymbolFamily.ONE_SIDED_RIGHT
    d = spectral_derivative(f, cfg["order"], fam)
    return [("ok", (float(v), 0.0, grid.size, "spectral")) for v in d.values]


def _rows_for(cfg, method, grid):
    command = cfg["command"]
    if method == "mc":
        return _mc_rows(cfg, grid, solve=(command == "solve"))
    if command == "frac-deriv" and method == "spectral":
        return _spectral_rows(cfg, grid)
    return _evaluate(cfg, method, grid)


def compute_profile(cfg) -> dict:
    """Evaluate the configured method (and the comparison method) on the grid."""
    grid = _grid(cfg)
    main = _rows_for(cfg, cfg["method"], grid)
    ref = _rows_for(cfg, cfg["compare"], grid) if cfg.get("compare") else None
    rows, excluded, failed = [], [], []
    for i, x in enumerate(grid):
        status, payload = main[i]
        if ref is not None and status == "ok" and ref[i][0] != "ok":
            status, payload = ref[i]
        if status == "config":
            raise ConfigError(payload)
        if status == "excluded":
            excluded.append(float(x))
            continue
        if status == "failed":
            failed.append((float(x), payload))
            continue
        value, err, n_terms, mode = payload
        if not math.isfinite(value):
            failed.append((float(x), "non-finite value"))
            continue
        row = [float(x), value, err, n_terms, mode]
        if ref is not None:
            row += [ref[i][1][0], abs(value - ref[i][1][0])]
        rows.append(row)
    if failed and not cfg["skip_failed"]:
        x0, why = failed[0]
        raise NumericalFailure(f"{len(failed)} point(s) failed, first at x={x0!r}: {why}")
    columns = list(COLUMNS) + (["reference", "abs_diff"] if ref is not None else [])
    return {"columns": columns, "rows": rows, "excluded": excluded,
            "skipped": [x for x, _ in failed]}


# --------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _recorded(cfg):
    # the destination is not part of the computation; leaving it out keeps
    # identical runs byte-identical wherever they are written
    return {k: v for k, v in cfg.items() if k != "out"}


def render(cfg, profile) -> str:
    meta = {"format_version": FORMAT_VERSION, "config": _recorded(cfg),
            "excluded": profile["excluded"], "skipped": profile["skipped"]}
    if cfg["format"] == "json":
        doc = dict(meta)
        doc["columns"] = profile["columns"]
        doc["rows"] = [dict(zip(profile["columns"], row)) for row in profile["rows"]]
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# format_version: {FORMAT_VERSION}\n")
    buf.write("# config: " + json.dumps(_recorded(cfg), sort_keys=True) + "\n")
    if profile["excluded"]:
        buf.write("# excluded: " + json.dumps(profile["excluded"]) + "\n")
    if profile["skipped"]:
        buf.write("# skipped: " + json.dumps(profile["skipped"]) + "\n")
    buf.write(",".join(profile["columns"]) + "\n")
    for row in profile["rows"]:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fractransport-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_validate(cfg) -> tuple[str, int]:
    options = {"seed": cfg["seed"]}
    for key in ("perturb_method", "perturb_kappa"):
        if cfg.get(key) is not None:
            options[key] = cfg[key]
    if "n_walkers" in cfg and cfg["n_walkers"] != DEFAULTS["n_walkers"]:
        options["n_walkers"] = cfg["n_walkers"]
    checks = run_checks(cfg.get("subset"), **options)
    ok = all(c.passed for c in checks)
    report = {"format_version": FORMAT_VERSION, "config": _recorded(cfg), "passed": ok,
              "checks": [c.as_dict() for c in checks]}
    return json.dumps(report, sort_keys=True, indent=1) + "\n", EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve_config(args)
        if cfg["command"] == "validate":
            text, code = run_validate(cfg)
        else:
            text, code = render(cfg, compute_profile(cfg)), EXIT_OK
    except ConfigError as exc:
        print(f"fractransport: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StabilityError, ValueError) as exc:
        print(f"fractransport: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, *_FAILURES) as exc:
        print(f"fractransport: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _emit(text, cfg.get("out"))
    except OSError as exc:
        print(f"fractransport: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
