"""Ground state of -Lap + V on the truncated ball (Dirichlet at r_max)."""
from dataclasses import dataclass

import numpy as np

from .elliptic import apply_laplacian
from .errors import IterationFailure
from .grid import RadialField, integrate_volume
from .kernels import TridiagonalFactor, lowest_eigenvalue


@dataclass(frozen=True)
class EigenResult:
    lambda_min: float
    chi: RadialField        # sup-normalised, positive inside, zero at r_max
    l2_norm: float
    residual: float
    bracket: tuple = (np.nan, np.nan)


@dataclass(frozen=True)
class DecayReport:
    status: str             # "pass", "fail" or "inapplicable"
    slope: float
    rate: float             # tested l = 0.5 sqrt(V_inf - Lambda)
    window: tuple = (np.nan, np.nan)

    @property
    def passed(self):
        return self.status == "pass"


def dirichlet_matrix(V):
    """Diagonal and off-diagonal of -Lap + V in w = r u form, unknowns w_1..w_{n-1}."""
    g = V.grid
    h2 = g.h * g.h
    v = np.asarray(V.values)
    diag = 2.0 / h2 + v[1:-1]
    off = np.full(g.n - 2, -1.0 / h2)
    return diag, off


def ground_state(V, tol=1e-10, max_passes=10):
    """Smallest eigenvalue by Sturm bisection, eigenvector by inverse iteration."""
    g = V.grid
    diag, off = dirichlet_matrix(V)
    lo, hi = lowest_eigenvalue(diag, off, tol=tol)
    lam = 0.5 * (lo + hi)
    # shift just below the spectrum keeps T - sigma I positive definite
    sigma = lo - tol
    factor = TridiagonalFactor(diag - sigma, off)
    w = np.ones(diag.shape[0])
    w /= np.linalg.norm(w)
    for _ in range(max_passes):
        w_new = factor.solve(w)
        w_new /= np.linalg.norm(w_new)
        if w_new.sum() < 0:
            w_new = -w_new
        change = np.max(np.abs(w_new - w))
        w = w_new
        if change < 1e-12:
            break
    else:
        raise IterationFailure(f"inverse iteration did not settle (last change {change:.3e})")

    r = g.r
    chi = np.zeros(g.size)
    chi[1:-1] = w / r[1:-1]
    h2 = g.h * g.h
    denom = 6.0 + (V.values[0] - lam) * h2
    if denom > 0:
        chi[0] = 6.0 * chi[1] / denom
    else:
        # grid too coarse for the origin row; even quadratic extrapolation instead
        chi[0] = max((4.0 * chi[1] - chi[2]) / 3.0, chi[1])
    chi /= np.max(np.abs(chi))
    chi = np.where(np.abs(chi) < 1e-300, 0.0, chi)
    chi_f = RadialField(g, chi)

    res = -np.asarray(apply_laplacian(chi_f).values) + (np.asarray(V.values) - lam) * chi
    residual = float(np.max(np.abs(res[:-1])))
    l2 = float(np.sqrt(max(integrate_volume(chi_f * chi_f), 0.0))) if g.n % 2 == 0 else np.nan
    return EigenResult(lambda_min=lam, chi=chi_f, l2_norm=l2, residual=residual,
                       bracket=(lo, hi))


def rayleigh_quotient(v, V):
    """(int |grad v|^2 + V v^2) / int v^2 for the discrete Dirichlet operator."""
    g = V.grid
    w = g.r * np.asarray(v.values)
    w = w[1:-1]
    diag, off = dirichlet_matrix(V)
    Tw = diag * w
    Tw[:-1] += off * w[1:]
    Tw[1:] += off * w[:-1]
    return float(w @ Tw / (w @ w))


def decay_check(res, V_inf, fraction=0.25):
    """Fit log chi over the outer ``fraction`` of its resolved support."""
    gap = V_inf - res.lambda_min
    if not gap > 0:
        return DecayReport("inapplicable", np.nan, np.nan)
    rate = 0.5 * np.sqrt(gap)
    chi = np.asarray(res.chi.values)
    r = res.chi.r
    ok = np.nonzero(chi[:-1] > 1e-250)[0]
    last = ok[-1] + 1
    start = int(last * (1.0 - fraction))
    sel = np.arange(start, last)
    sel = sel[chi[sel] > 1e-250]
    if sel.size < 3:
        return DecayReport("fail", np.nan, rate)
    slope = float(np.polyfit(r[sel], np.log(chi[sel]), 1)[0])
    status = "pass" if slope <= -rate else "fail"
    return DecayReport(status, slope, rate, (float(r[sel[0]]), float(r[sel[-1]])))
