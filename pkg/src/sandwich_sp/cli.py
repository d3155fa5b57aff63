"""Command-line entry points.

Exit codes: 0 success, 1 hypothesis or validation failure, 2 non-convergence,
3 I/O error.
"""
import argparse
import json
import os
import sys

import numpy as np

from .config import load_problem
from .envelopes import check_hypotheses
from .errors import (ConfigError, ConvergenceError, HypothesisFailure, LambdaOutOfRangeError,
                     SandwichError, SweepError)
from .experiments import geometric_ladder, lambda_sweep, uniform_bound_table
from .export import export_solution, read_columns, write_columns
from .grid import RadialField, RadialGrid
from .poisson import RULES, newtonian_potential
from .solver import sandwich_iterate
from .spectrum import decay_check, ground_state
from .svg import emit_svg

EXIT_OK, EXIT_INVALID, EXIT_NOCONV, EXIT_IO = 0, 1, 2, 3


def _print(obj):
    print(json.dumps(obj, indent=2))


def _solve_summary(res):
    return {
        "lambda": res.lam, "lambda_max": res.lambda_max, "lambda_min": res.lambda_min,
        "k": res.k, "eps0": res.eps0, "iterations": res.iterations, "converged": res.converged,
        "last_step": float(res.step_diffs[-1]) if res.iterations else None,
        "pde_residual_max": res.pde_residual_max, "pde_tolerance": res.pde_tolerance,
        "poisson_residual_max": res.poisson_residual_max,
        "sandwich_ok": res.sandwich_ok, "sandwich_worst": res.sandwich_worst,
        "elapsed_s": res.elapsed,
    }


def _solver_kwargs(options):
    s = options["solver"]
    return {"k": s["k"], "tol": s["tol"], "max_iter": s["max_iter"]}


def cmd_check(args):
    spec, grid, _ = load_problem(args.config)
    report = check_hypotheses(spec, grid)
    _print(report.as_dict())
    return EXIT_OK if report.all_ok else EXIT_INVALID


def cmd_eigen(args):
    spec, grid, _ = load_problem(args.config)
    V = RadialField(grid, spec.sample_V(grid))
    res = ground_state(V)
    decay = decay_check(res, spec.V_inf)
    _print({"lambda_min": res.lambda_min, "bracket": list(res.bracket), "residual": res.residual,
            "l2_norm": res.l2_norm,
            "decay": {"status": decay.status, "slope": decay.slope, "rate": decay.rate}})
    if args.out:
        write_columns(args.out, (grid.r, res.chi.values, V.values), ("r", "chi", "V"))
    return EXIT_OK


def cmd_solve(args):
    spec, grid, options = load_problem(args.config)
    if args.lam is not None:
        spec = spec.with_lambda(args.lam)
    try:
        res = sandwich_iterate(spec, grid, **_solver_kwargs(options))
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.result is not None:
            _print(_solve_summary(exc.result))
        return EXIT_NOCONV
    _print(_solve_summary(res))
    out = args.out or os.path.join(options["output"]["directory"], "solution.csv")
    export_solution(res, spec, out)
    if options["output"]["emit_svg"]:
        emit_svg({"u": (grid.r, res.u.values), "psi": (grid.r, res.sup.values),
                  "sub": (grid.r, res.sub.values)},
                 os.path.splitext(out)[0] + ".svg", log_y=True, title=f"lambda = {res.lam:.6g}")
    return EXIT_OK


def cmd_sweep(args):
    spec, grid, options = load_problem(args.config)
    sw = options["sweep"]
    out_dir = args.out or options["output"]["directory"]
    os.makedirs(out_dir, exist_ok=True)
    if sw["ladder"] is not None:
        ladder = sw["ladder"]
    else:
        ladder = geometric_ladder(check_hypotheses(spec, grid).lambda_max, sw["J"])
    res = lambda_sweep(spec, grid, ladder, **_solver_kwargs(options))
    table = uniform_bound_table(res)
    for j, (lam, sol) in enumerate(zip(res.lambdas, res.solutions)):
        export_solution(sol, spec.with_lambda(lam), os.path.join(out_dir, f"solution_{j:02d}.csv"))
    write_columns(os.path.join(out_dir, "norms.csv"),
                  list(np.asarray(table.rows).T) + [res.h1_to_u0],
                  ("lambda", "L2", "H1", "W22", "h1_to_u0"))
    summary = {"lambda_max": res.lambda_max, "lambdas": res.lambdas.tolist(),
               "h1_to_u0": res.h1_to_u0.tolist(), "ratios": table.ratios,
               "iterations": [s.iterations for s in res.solutions]}
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if options["output"]["emit_svg"]:
        emit_svg({f"lambda={lam:.4g}": (grid.r, s.u.values) for lam, s in zip(res.lambdas, res.solutions)},
                 os.path.join(out_dir, "solutions.svg"), log_y=True)
    _print(summary)
    return EXIT_OK


def _grid_from_r(r):
    n = r.size - 1
    if n < 2 or r[0] != 0.0:
        raise ConfigError("density file needs an r column starting at 0 with at least 3 nodes")
    grid = RadialGrid(float(r[-1]), n)
    if not np.allclose(r, grid.r, rtol=0.0, atol=1e-9 * grid.h):
        raise ConfigError("density file r column is not a uniform grid")
    return grid


def cmd_poisson(args):
    cols = read_columns(args.density)
    for name in ("r", args.column):
        if name not in cols:
            raise ConfigError(f"{args.density}: missing column {name!r}")
    grid = _grid_from_r(cols["r"])
    u = RadialField(grid, cols[args.column])
    phi = newtonian_potential(u, rule=args.rule)
    if args.out:
        write_columns(args.out, (grid.r, u.values, phi.values), ("r", args.column, "phi"))
    _print({"phi0": float(phi.values[0]), "phi_r_max": float(phi.values[-1])})
    return EXIT_OK


def cmd_plot(args):
    cols = read_columns(args.csv)
    if "r" not in cols:
        raise ConfigError(f"{args.csv}: missing column 'r'")
    names = args.columns.split(",") if args.columns else [c for c in cols if c != "r"]
    missing = [c for c in names if c not in cols]
    if missing:
        raise ConfigError(f"{args.csv}: missing column {missing[0]!r}")
    emit_svg([(c, (cols["r"], cols[c])) for c in names], args.svg, log_y=args.log_y,
             title=args.title)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="sandwich-sp",
                                 description="Sub/supersolution solver for radial Schrodinger-Poisson problems.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check hypotheses H1-H4 and condition (V)")
    p.add_argument("config")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eigen", help="ground state of -Lap + V")
    p.add_argument("config")
    p.add_argument("--out", help="CSV file for r, chi, V")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("solve", help="sandwich iteration at one coupling")
    p.add_argument("config")
    p.add_argument("--lambda", dest="lam", type=float, help="override the configured coupling")
    p.add_argument("--out", help="solution CSV (default <output.directory>/solution.csv)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve along a coupling ladder")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default output.directory)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("poisson", help="Newtonian potential of u^2 from a CSV column")
    p.add_argument("--density", required=True, help="CSV with columns r and u")
    p.add_argument("--column", default="u")
    p.add_argument("--rule", choices=RULES, default="trapezoid")
    p.add_argument("--out", help="CSV file for r, u, phi")
    p.set_defaults(func=cmd_poisson)

    p = sub.add_parser("plot", help="plot CSV columns against r as SVG")
    p.add_argument("csv")
    p.add_argument("--svg", required=True)
    p.add_argument("--columns", help="comma-separated column names (default all)")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc.cause, ConvergenceError):
            return EXIT_NOCONV
        return EXIT_IO if isinstance(exc.cause, OSError) else EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HypothesisFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        _print(exc.report.as_dict())
        return EXIT_INVALID
    except (ConfigError, LambdaOutOfRangeError, SandwichError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
