"""Hot loops: symmetric tridiagonal LDL^T solves and Sturm-sequence bisection.

Each public function dispatches to a numba-compiled loop when
``_accel.USE_NUMBA`` is set and to a numpy/scipy (LAPACK) path otherwise.
Both paths are importable directly (``*_jit`` / ``*_numpy``) so tests and the
benchmark can compare them.
"""
import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.linalg.lapack import dpttrf, dpttrs

from . import _accel
from ._accel import njit

__all__ = [
    "TridiagonalFactor",
    "factor_tridiagonal",
    "sturm_count",
    "lowest_eigenvalue",
]


# ---------------------------------------------------------------------------
# compiled loops

@njit
def _ldl_factor_jit(diag, off):
    m = diag.shape[0]
    piv = np.empty(m)
    mult = np.zeros(m)
    piv[0] = diag[0]
    for i in range(1, m):
        mult[i] = off[i - 1] / piv[i - 1]
        piv[i] = diag[i] - mult[i] * off[i - 1]
    return piv, mult


@njit
def _ldl_solve_jit(piv, mult, rhs):
    m = piv.shape[0]
    x = np.empty(m)
    x[0] = rhs[0]
    for i in range(1, m):
        x[i] = rhs[i] - mult[i] * x[i - 1]
    for i in range(m):
        x[i] /= piv[i]
    for i in range(m - 2, -1, -1):
        x[i] -= mult[i + 1] * x[i + 1]
    return x


@njit
def _sturm_count_jit(diag, off, x):
    # number of eigenvalues strictly below x (LAPACK dstebz pivot guard)
    pivmin = 1e-300
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit
def _bisect_lowest_jit(diag, off, lo, hi, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_count_jit(diag, off, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


# ---------------------------------------------------------------------------
# numpy / LAPACK fallbacks

def _sturm_count_numpy(diag, off, shifts):
    """Vectorised over shifts; loops over the (short) recurrence in python."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    pivmin = 1e-300
    q = diag[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    off2 = off * off
    for i in range(1, diag.shape[0]):
        q = (diag[i] - shifts) - off2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _lowest_eigenvalue_numpy(diag, off, tol):
    lam = eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                           select_range=(0, 0), lapack_driver="stebz",
                           tol=tol)[0]
    # stebz returns the interval midpoint; widen so that lo is a safe shift
    return lam - tol, lam + tol


# ---------------------------------------------------------------------------
# dispatch

def _gershgorin(diag, off):
    pad = np.zeros(diag.shape[0])
    pad[:-1] += np.abs(off)
    pad[1:] += np.abs(off)
    return float(np.min(diag - pad)), float(np.max(diag + pad))


class TridiagonalFactor:
    """Cached LDL^T factorisation of a symmetric positive definite tridiagonal matrix.

    ``diag`` has length m and ``off`` length m-1. Construction raises
    ``numpy.linalg.LinAlgError`` when a pivot is not positive.
    """

    def __init__(self, diag, off, use_numba=None):
        diag = np.ascontiguousarray(diag, dtype=float)
        off = np.ascontiguousarray(off, dtype=float)
        if off.shape[0] != diag.shape[0] - 1:
            raise ValueError("off-diagonal must have length len(diag) - 1")
        self.use_numba = _accel.USE_NUMBA if use_numba is None else use_numba
        self.size = diag.shape[0]
        if self.use_numba:
            piv, mult = _ldl_factor_jit(diag, off)
            if not np.all(piv > 0.0):
                raise np.linalg.LinAlgError("tridiagonal matrix is not positive definite")
            self._state = (piv, mult)
        else:
            d, e, info = dpttrf(diag, off)
            if info != 0:
                raise np.linalg.LinAlgError(f"dpttrf failed (info={info})")
            self._state = (d, e)

    def solve(self, rhs):
        rhs = np.ascontiguousarray(rhs, dtype=float)
        if self.use_numba:
            return _ldl_solve_jit(self._state[0], self._state[1], rhs)
        x, info = dpttrs(self._state[0], self._state[1], rhs)
        if info != 0:  # pragma: no cover - only on malformed input
            raise np.linalg.LinAlgError(f"dpttrs failed (info={info})")
        return x


def factor_tridiagonal(diag, off, use_numba=None):
    return TridiagonalFactor(diag, off, use_numba=use_numba)


def sturm_count(diag, off, x, use_numba=None):
    """Number of eigenvalues of the symmetric tridiagonal (diag, off) below ``x``."""
    use_numba = _accel.USE_NUMBA if use_numba is None else use_numba
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    if use_numba:
        return int(_sturm_count_jit(diag, off, float(x)))
    return int(_sturm_count_numpy(diag, off, x)[0])


def lowest_eigenvalue(diag, off, tol=1e-10, use_numba=None):
    """Bracket ``(lo, hi)`` of the smallest eigenvalue with ``hi - lo <= 2 * tol``.

    ``lo`` lies below the spectrum (up to ``tol``), so ``T - lo I`` is safe to
    factor for inverse iteration.
    """
    use_numba = _accel.USE_NUMBA if use_numba is None else use_numba
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    if use_numba:
        lo = _gershgorin(diag, off)[0] - 1.0
        hi = float(diag.min()) + 1.0  # Rayleigh quotient of a unit vector
        lo, hi = _bisect_lowest_jit(diag, off, lo, hi, tol)
        return float(lo), float(hi)
    return _lowest_eigenvalue_numpy(diag, off, tol)
