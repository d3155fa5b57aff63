"""Sandwich iteration u_{n+1} = (-Lap + k)^{-1} f(u_n, u_n) between eps0*chi and psi.

    f(w, v) = Q v^p + k v - V v - lambda phi_w v,   phi_w = potential of w^2

Positivity and the sandwich are verified after every step, never enforced.
"""
from dataclasses import dataclass, field
import time

import numpy as np

from . import _accel
from ._accel import njit
from .elliptic import helmholtz_operator, interior_max, pde_residual, positive_power, apply_laplacian
from .envelopes import (check_hypotheses, lambda_max, spec_potential_bound, subsolution_params,
                        supersolution)
from .errors import ConvergenceError, HypothesisFailure, LambdaOutOfRangeError
from .grid import RadialField, check_same_grid
from .poisson import newtonian_potential, poisson_residual
from .spectrum import ground_state

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500


def choose_k(spec, grid):
    """Shift making df/dv > 0 for 0 < v <= psi and every admissible potential."""
    V = spec.sample_V(grid)
    Q = spec.sample_Q(grid)
    psi_max = float(np.max(supersolution(spec, grid).values))
    return (float(np.max(np.abs(V))) + spec.lam * spec_potential_bound(spec)
            + spec.p * float(np.max(np.abs(Q))) * psi_max ** (spec.p - 1.0) + 1.0)


def rhs_f(w, v, phi_w, k, spec):
    """f(x, w, v) = Q v^p + k v - V v - lambda phi_w v (w enters only through phi_w)."""
    g = check_same_grid(w, v, phi_w)
    vv = np.asarray(v.values)
    V = spec.sample_V(g)
    Q = spec.sample_Q(g)
    out = Q * positive_power(vv, spec.p) + k * vv - V * vv - spec.lam * np.asarray(phi_w.values) * vv
    return RadialField(g, out)


def df_dv(v, phi_w, k, spec, grid):
    """p Q v^(p-1) + k - V - lambda phi_w, the derivative that must stay positive."""
    V = spec.sample_V(grid)
    Q = spec.sample_Q(grid)
    return spec.p * Q * positive_power(np.asarray(v), spec.p - 1.0) + k - V - spec.lam * np.asarray(phi_w)


def sandwich_check(u, sub, sup):
    """(ok, worst) with worst = min over nodes of min(u - sub, sup - u)."""
    check_same_grid(u, sub, sup)
    uv = np.asarray(u.values)
    worst = float(min(np.min(uv - np.asarray(sub.values)), np.min(np.asarray(sup.values) - uv)))
    return worst >= -1e-8 * float(np.max(sup.values)), worst


# ---------------------------------------------------------------------------
# iteration kernels

@njit
def _ipow(x, n):
    out = 1.0
    for _ in range(n):
        out *= x
    return out


@njit
def _iterate_jit(u0, V, Q, sub, sup, piv, mult, r, h, k, lam, p, p_int, zero_potential,
                 tol, max_iter, stride):
    n1 = u0.shape[0]
    m1 = n1 - 1
    u = u0.copy()
    un = np.empty(n1)
    phi = np.zeros(n1)
    inner = np.zeros(n1)
    outer = np.zeros(n1)
    f = np.empty(n1)
    x = np.empty(m1)
    inv_piv = 1.0 / piv
    inv_r = np.zeros(n1)
    inv_r[1:] = 1.0 / r[1:]
    diffs = np.empty(max_iter)
    n_snap = max_iter // stride + 1
    snaps = np.empty((n_snap, n1))
    worst = np.inf
    for i in range(n1):
        worst = min(worst, u[i] - sub[i], sup[i] - u[i])
    h2 = h * h
    hh = 0.5 * h
    it = 0
    while it < max_iter:
        if not zero_potential:
            # shell-theorem potential, trapezoid rule (see poisson.newtonian_potential)
            m = 0.0
            ce = 0.0
            a0 = 0.0
            for i in range(1, n1):
                a1 = r[i] * u[i] * u[i]
                m += hh * (r[i - 1] * a0 + r[i] * a1)
                ce += hh * (a0 + a1)
                inner[i] = m * inv_r[i]
                outer[i] = ce
                a0 = a1
            for i in range(1, n1):
                phi[i] = inner[i] + (ce - outer[i])
            phi[0] = phi[1] + h2 * u[0] * u[0] / 6.0
        for i in range(n1):
            ui = u[i]
            up = _ipow(ui, p_int) if p_int > 0 else ui ** p
            f[i] = Q[i] * up + k * ui - V[i] * ui - lam * phi[i] * ui
        # LDL^T solve for w = r u on nodes 1..n, halved Robin row
        prev = 0.0
        for j in range(m1):
            rhs = r[j + 1] * f[j + 1]
            if j == m1 - 1:
                rhs *= 0.5
            prev = rhs - mult[j] * prev if j > 0 else rhs
            x[j] = prev
        nxt = x[m1 - 1] * inv_piv[m1 - 1]
        x[m1 - 1] = nxt
        for j in range(m1 - 2, -1, -1):
            nxt = x[j] * inv_piv[j] - mult[j + 1] * nxt
            x[j] = nxt
        for j in range(m1):
            un[j + 1] = x[j] * inv_r[j + 1]
        un[0] = (f[0] * h2 + 6.0 * un[1]) / (6.0 + k * h2)
        d = 0.0
        for i in range(n1):
            d = max(d, abs(un[i] - u[i]))
            worst = min(worst, un[i] - sub[i], sup[i] - un[i])
        u, un = un, u
        diffs[it] = d
        if it % stride == 0:
            snaps[it // stride, :] = u
        it += 1
        if d <= tol:
            break
    return u, diffs[:it], worst, snaps[: (it - 1) // stride + 1]


def _iterate_numpy(u0, V, Q, sub, sup, op, k, lam, p, zero_potential, tol, max_iter, stride):
    grid = op.grid
    u = u0.copy()
    phi = np.zeros_like(u)
    diffs = []
    snaps = []
    worst = float(min(np.min(u - sub), np.min(sup - u)))
    for it in range(max_iter):
        if not zero_potential:
            phi = np.asarray(newtonian_potential(RadialField(grid, u)).values)
        f = Q * positive_power(u, p) + k * u - V * u - lam * phi * u
        un = op.solve_values(f)
        d = float(np.max(np.abs(un - u)))
        worst = min(worst, float(np.min(un - sub)), float(np.min(sup - un)))
        u = un
        diffs.append(d)
        if it % stride == 0:
            snaps.append(u.copy())
        if d <= tol:
            break
    return u, np.asarray(diffs), worst, np.asarray(snaps)


# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    u: RadialField
    phi: RadialField
    k: float
    iterations: int
    step_diffs: np.ndarray
    pde_residual_max: float
    poisson_residual_max: float
    sandwich_ok: bool
    sandwich_worst: float
    converged: bool
    lam: float
    sub: RadialField
    sup: RadialField
    lambda_min: float
    lambda_max: float
    eps0: float
    laplacian_max: float = np.nan
    fixed_point_residual: float = np.nan
    snapshots: np.ndarray = field(default=None, repr=False)
    snapshot_stride: int = 1
    elapsed: float = 0.0

    @property
    def pde_tolerance(self):
        return 1e-6 * (1.0 + self.laplacian_max)


def sandwich_iterate(spec, grid, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, k=None,
                     check=True, zero_potential=False, snapshot_stride=None,
                     raise_on_failure=True, use_numba=None):
    """Run the sandwich iteration from u_0 = eps0 * chi.

    ``zero_potential`` forces phi_n = 0 (only meaningful with lambda = 0, where it
    must not change the result). ``snapshot_stride`` keeps every stride-th iterate.
    With ``raise_on_failure=False`` an unconverged result is returned instead of
    raising ``ConvergenceError``.
    """
    t0 = time.perf_counter()
    use_numba = _accel.USE_NUMBA if use_numba is None else use_numba
    eigen = ground_state(RadialField(grid, spec.sample_V(grid)))
    if check:
        report = check_hypotheses(spec, grid, eigen=eigen)
        if not report.all_ok:
            raise HypothesisFailure(report)
    lam_min = eigen.lambda_min
    lmax = lambda_max(spec, lam_min) if lam_min < 0 else 0.0
    if not (0 <= spec.lam < lmax):
        raise LambdaOutOfRangeError(spec.lam, lmax)
    params = subsolution_params(eigen, spec, grid)
    if k is None:
        k = choose_k(spec, grid)
    k = float(k)

    sup = supersolution(spec, grid)
    sub = eigen.chi * params.eps0
    V = spec.sample_V(grid)
    Q = spec.sample_Q(grid)
    op = helmholtz_operator(grid, k)
    stride = snapshot_stride or max(1, max_iter)
    sub_v = np.asarray(sub.values)
    sup_v = np.asarray(sup.values)

    if use_numba:
        piv, mult = _ldl_state(op)
        u, diffs, worst, snaps = _iterate_jit(
            sub_v.copy(), V, Q, sub_v, sup_v, piv, mult, np.asarray(grid.r), grid.h,
            k, float(spec.lam), float(spec.p), _integer_exponent(spec.p),
            bool(zero_potential), float(tol),
            int(max_iter), int(stride))
    else:
        u, diffs, worst, snaps = _iterate_numpy(
            sub_v.copy(), V, Q, sub_v, sup_v, op, k, float(spec.lam), float(spec.p),
            bool(zero_potential), float(tol), int(max_iter), int(stride))

    u_f = RadialField(grid, u)
    phi = newtonian_potential(u_f)
    converged = diffs.size > 0 and diffs[-1] <= tol
    res = pde_residual(u_f, phi, spec)
    lap_max = interior_max(apply_laplacian(u_f))
    # re-substitution: (-Lap + k) u - f(u, u), with the boundary row in Robin form
    f_uu = rhs_f(u_f, u_f, phi, k, spec)
    fixed = float(np.max(np.abs(np.asarray(op.apply(u_f).values) - np.asarray(f_uu.values))))
    scale = float(np.max(sup_v))
    result = SolveResult(
        u=u_f, phi=phi, k=k, iterations=int(diffs.size), step_diffs=diffs,
        pde_residual_max=interior_max(res),
        poisson_residual_max=interior_max(poisson_residual(phi, u_f)),
        sandwich_ok=bool(worst >= -1e-8 * scale), sandwich_worst=float(worst),
        converged=bool(converged), lam=float(spec.lam), sub=sub, sup=sup,
        lambda_min=float(lam_min), lambda_max=float(lmax), eps0=params.eps0,
        laplacian_max=lap_max, fixed_point_residual=fixed,
        snapshots=snaps, snapshot_stride=stride,
        elapsed=time.perf_counter() - t0,
    )
    if not converged and raise_on_failure:
        raise ConvergenceError(
            f"no convergence in {max_iter} iterations at lambda={spec.lam} "
            f"(last step {diffs[-1] if diffs.size else np.nan:.3e})", result)
    return result


def _integer_exponent(p):
    return int(p) if float(p).is_integer() and p <= 16 else 0


def _ldl_state(op):
    fac = op.factor
    if fac.use_numba:
        return fac._state
    # factor was built by LAPACK; rebuild the compiled LDL^T state
    from .kernels import _ldl_factor_jit

    return _ldl_factor_jit(op.diag, op.off)
