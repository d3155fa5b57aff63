"""Radial Laplacian and the resolvent (-Lap + k)^{-1} on a truncated ball.

Both use the substitution w = r u, which turns the radial Laplacian into a
plain second difference: Lap u = (r u)'' / r. At r = 0 the symmetric limit
Lap u(0) = 3 u''(0) is used.
"""
from functools import lru_cache

import numpy as np

from . import _accel
from .errors import DomainError
from .grid import RadialField
from .kernels import TridiagonalFactor


def apply_laplacian(u):
    """Lap u = u'' + 2u'/r with second-order stencils (one-sided at r_max)."""
    v = np.asarray(u.values)
    g = u.grid
    h2 = g.h * g.h
    r = g.r
    out = np.empty_like(v)
    out[0] = 6.0 * (v[1] - v[0]) / h2
    out[1:-1] = ((v[2:] - 2.0 * v[1:-1] + v[:-2]) / h2
                 + (v[2:] - v[:-2]) / (g.h * r[1:-1]))
    d2 = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h2
    d1 = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * g.h)
    out[-1] = d2 + 2.0 * d1 / r[-1]
    return RadialField(g, out)


class HelmholtzOperator:
    """Factorised discrete -Lap + k with w(0) = 0 and w' + sqrt(k) w = 0 at r_max.

    Unknowns are w_1..w_n; the Robin row is halved so the matrix is symmetric.
    It is an M-matrix (positive diagonal, nonpositive off-diagonals, strictly
    diagonally dominant), hence nonnegative data gives nonnegative solutions.
    u(0) is closed by the origin row -6(u_1 - u_0)/h^2 + k u_0 = f_0.
    """

    def __init__(self, grid, k, use_numba=None):
        k = float(k)
        if not (np.isfinite(k) and k > 0):
            raise ValueError(f"k must be positive, got {k!r}")
        self.grid = grid
        self.k = k
        n, h = grid.n, grid.h
        diag = np.full(n, 2.0 / h**2 + k)
        diag[-1] = (1.0 + h * np.sqrt(k)) / h**2 + 0.5 * k
        off = np.full(n - 1, -1.0 / h**2)
        self.diag = diag
        self.off = off
        try:
            self.factor = TridiagonalFactor(diag, off, use_numba=use_numba)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - k > 0 excludes this
            raise np.linalg.LinAlgError(f"singular Helmholtz system for k={k}") from exc

    def solve_values(self, f):
        """Array-in, array-out solve used by the iteration loop."""
        g = self.grid
        r = g.r
        rhs = r[1:] * f[1:]
        rhs[-1] *= 0.5
        w = self.factor.solve(rhs)
        u = np.empty(g.size)
        u[1:] = w / r[1:]
        h2 = g.h * g.h
        u[0] = (f[0] * h2 + 6.0 * u[1]) / (6.0 + self.k * h2)
        return u

    def solve(self, f):
        return RadialField(self.grid, self.solve_values(np.asarray(f.values)))

    def apply(self, u):
        """The discrete operator itself, row by row (for re-substitution checks)."""
        v = np.asarray(u.values)
        g = self.grid
        out = -np.asarray(apply_laplacian(u).values) + self.k * v
        # boundary row: halved Robin equation expressed back in u
        r, h = g.r, g.h
        w_n, w_nm1 = r[-1] * v[-1], r[-2] * v[-2]
        row = (-w_nm1 + (1.0 + h * np.sqrt(self.k)) * w_n) / h**2 + 0.5 * self.k * w_n
        out[-1] = 2.0 * row / r[-1]
        return RadialField(g, out)


@lru_cache(maxsize=32)
def _operator(grid, k, use_numba):
    return HelmholtzOperator(grid, k, use_numba=use_numba)


def helmholtz_operator(grid, k):
    return _operator(grid, float(k), _accel.USE_NUMBA)


def helmholtz_solve(f, k):
    """u = (-Lap + k)^{-1} f on the grid of ``f``."""
    return helmholtz_operator(f.grid, k).solve(f)


def positive_power(v, p):
    """v**p for v >= 0; raises DomainError on negative entries when p is fractional."""
    v = np.asarray(v, dtype=float)
    if float(p).is_integer():
        return v ** int(p)
    if np.any(v < 0):
        raise DomainError(f"negative values raised to fractional power p={p}")
    return np.power(v, p)


def pde_residual(u, phi, spec):
    """-Lap u + V u + lambda phi u - Q u^p, sampled on the grid."""
    g = u.grid
    V = spec.sample_V(g)
    Q = spec.sample_Q(g)
    v = np.asarray(u.values)
    up = positive_power(v, spec.p)
    lap = np.asarray(apply_laplacian(u).values)
    res = -lap + V * v + spec.lam * np.asarray(phi.values) * v - Q * up
    return RadialField(g, res)


def interior_max(field):
    """max |field| over nodes 0..n-1 (the outer node carries the boundary condition)."""
    return float(np.max(np.abs(np.asarray(field.values)[:-1])))
