"""Compiled loops vs the numpy/scipy fallback.

    python3 benchmarks/bench_kernels.py [--n 10000] [--iters 2000] [--repeat 3]

Times a tridiagonal solve, the lowest-eigenvalue bisection and a fixed number
of sandwich iterations on the example_1_2 family (p = 3). Compilation is excluded by a
warm-up call; both paths must agree to rounding.
"""
import argparse
import time

import numpy as np

from sandwich_sp import kernels
from sandwich_sp.elliptic import HelmholtzOperator
from sandwich_sp.envelopes import check_hypotheses
from sandwich_sp.grid import make_grid
from sandwich_sp.problem import example_1_2
from sandwich_sp.solver import sandwich_iterate
from sandwich_sp.spectrum import dirichlet_matrix


def best_of(fn, repeat):
    fn()  # warm-up (numba compile, caches)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10000)
    ap.add_argument("--iters", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    grid = make_grid(100.0, args.n)
    spec = example_1_2(p=3.0)
    spec = spec.with_lambda(0.1 * check_hypotheses(spec, grid).lambda_max)
    op = HelmholtzOperator(grid, 300.0, use_numba=False)
    rhs = np.random.default_rng(0).random(op.diag.shape[0])
    diag, off = dirichlet_matrix(grid.sample(spec.V))

    cases = {
        "tridiagonal solve": {
            flag: (lambda f=flag: kernels.TridiagonalFactor(op.diag, op.off, use_numba=f).solve(rhs))
            for flag in (True, False)
        },
        "lowest eigenvalue": {
            flag: (lambda f=flag: kernels.lowest_eigenvalue(diag, off, use_numba=f))
            for flag in (True, False)
        },
        f"{args.iters} sandwich steps": {
            flag: (lambda f=flag: sandwich_iterate(spec, grid, max_iter=args.iters, check=False,
                                                   raise_on_failure=False, use_numba=f).u.values)
            for flag in (True, False)
        },
    }

    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<24}{'numba [s]':>12}{'fallback [s]':>14}{'speed-up':>10}{'max |diff|':>13}")
    for name, paths in cases.items():
        t_jit, a = best_of(paths[True], args.repeat)
        t_np, b = best_of(paths[False], args.repeat)
        diff = float(np.max(np.abs(np.subtract(_first(a), _first(b)))))
        print(f"{name:<24}{t_jit:>12.4g}{t_np:>14.4g}{t_np / t_jit:>10.2f}{diff:>13.2e}")


def _first(x):
    # eigenvalue paths return a (lo, hi) bracket; compare the lower end
    return x[0] if isinstance(x, tuple) else x


if __name__ == "__main__":
    main()
