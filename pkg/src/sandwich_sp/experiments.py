"""Coupling sweeps: distance of u_lambda to the lambda = 0 solution and norm uniformity."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import os

import numpy as np

from .envelopes import check_hypotheses
from .errors import HypothesisFailure, SweepError
from .grid import check_same_grid, norm_sobolev
from .solver import sandwich_iterate

DEFAULT_J = 5


@dataclass
class SweepResult:
    lambdas: np.ndarray          # descending
    solutions: list
    h1_to_u0: np.ndarray
    norm_table: list             # rows (lam, L2, H1, W22)
    lambda_max: float = np.nan


def geometric_ladder(lambda_max, J=DEFAULT_J):
    """lambda_max / 2^j for j = 1..J, then 0."""
    return [lambda_max / 2.0 ** j for j in range(1, J + 1)] + [0.0]


def thread_count(env=None):
    env = os.environ if env is None else env
    raw = env.get("SP_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SP_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"SP_THREADS must be a positive integer, got {raw!r}")
    return n


def h1_distance(u, v):
    check_same_grid(u, v)
    return norm_sobolev(u - v, 1, 2.0)


def _solve_one(spec, grid, lam, solver_opts):
    try:
        return sandwich_iterate(spec.with_lambda(lam), grid, check=False, **solver_opts)
    except Exception as exc:
        raise SweepError(lam, exc) from exc


def lambda_sweep(spec, grid, ladder, threads=None, **solver_opts):
    """Cold-start solve at every ladder value; hypotheses are checked once up front.

    Errors from individual solves are re-raised as ``SweepError`` carrying the
    offending lambda.
    """
    lams = np.sort(np.asarray(ladder, dtype=float))[::-1]
    if lams.size == 0 or not np.any(lams == 0.0):
        raise ValueError("ladder must contain 0")
    if np.unique(lams).size != lams.size:
        raise ValueError("ladder values must be distinct")
    report = check_hypotheses(spec, grid)
    if not report.all_ok:
        raise HypothesisFailure(report)

    workers = min(thread_count() if threads is None else threads, lams.size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_solve_one, spec, grid, lam, solver_opts) for lam in lams]
            solutions = [f.result() for f in futures]
    else:
        solutions = [_solve_one(spec, grid, lam, solver_opts) for lam in lams]

    u0 = solutions[-1].u
    h1 = np.array([h1_distance(s.u, u0) for s in solutions])
    table = [(float(lam), norm_sobolev(s.u, 0, 2.0), norm_sobolev(s.u, 1, 2.0),
              norm_sobolev(s.u, 2, 2.0)) for lam, s in zip(lams, solutions)]
    return SweepResult(lambdas=lams, solutions=solutions, h1_to_u0=h1, norm_table=table,
                       lambda_max=report.lambda_max)


@dataclass(frozen=True)
class BoundTable:
    rows: list                   # (lam, L2, H1, W22)
    ratios: dict                 # column -> max/min across lambda

    def as_dict(self):
        return {"rows": [dict(zip(("lambda", "L2", "H1", "W22"), r)) for r in self.rows],
                "ratios": dict(self.ratios)}


def uniform_bound_table(res):
    rows = list(res.norm_table) if res is not None else []
    if not rows:
        raise ValueError("uniform_bound_table needs at least one sweep entry")
    arr = np.asarray(rows, dtype=float)
    ratios = {}
    for j, name in enumerate(("L2", "H1", "W22"), start=1):
        col = arr[:, j]
        ratios[name] = float(np.max(col) / np.min(col))
    return BoundTable(rows=[tuple(map(float, r)) for r in rows], ratios=ratios)
