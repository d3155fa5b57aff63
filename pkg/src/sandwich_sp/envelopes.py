"""Supersolution psi, sub-solution scale eps0 * chi, and hypothesis checks."""
from dataclasses import dataclass, field

import numpy as np

from .elliptic import apply_laplacian, positive_power
from .errors import LambdaOutOfRangeError
from .grid import RadialField, check_same_grid
from .poisson import potential_bound
from .problem import h_profile, sign_change_radius
from .spectrum import ground_state

H2_TAIL_FRACTION = 0.10
H2_TOL = 1e-3
COND_V_NODES = 5
M_SAFETY = 1.1
RATIO_SAFETY = 0.9


def supersolution(spec, grid):
    """psi(r) = a (1 + theta^2 r^2)^-alpha."""
    r = grid.r
    return RadialField(grid, spec.a * (1.0 + (spec.theta * r) ** 2) ** (-spec.alpha))


def spec_potential_bound(spec):
    return potential_bound(spec.alpha, spec.theta, spec.a)


def lambda_max(spec, lambda_min):
    """Coupling threshold -Lambda / sup(phi); -2(2 alpha - 1) Lambda when a = theta = 1."""
    return -lambda_min / spec_potential_bound(spec)


def h4_gap(spec, r):
    """Normalised (H4)' slack  (V - theta^2 H(theta r)) - Q psi^(p-1); >= 0 where it holds."""
    r = np.asarray(r, dtype=float)
    psi_pm1 = (spec.a * (1.0 + (spec.theta * r) ** 2) ** (-spec.alpha)) ** (spec.p - 1.0)
    return (spec.V(r) - h_profile(spec.alpha, spec.theta, r)) - spec.Q(r) * psi_pm1


def h4_bound(spec, r):
    """Right-hand side of (H4)': a^(1-p) (1 + theta^2 r^2)^(alpha (p-1)) [V - theta^2 H(theta r)]."""
    r = np.asarray(r, dtype=float)
    return (spec.a ** (1.0 - spec.p) * (1.0 + (spec.theta * r) ** 2) ** (spec.alpha * (spec.p - 1.0))
            * (spec.V(r) - h_profile(spec.alpha, spec.theta, r)))


def _sign_structure(values):
    if np.all(values <= 0):
        return "nonpositive"
    if np.any(values < 0):
        return "sign-changing"
    return "nonnegative"


@dataclass(frozen=True)
class HypothesisReport:
    h1_ok: bool
    h2_ok: bool
    h3_ok: bool
    h4_ok: bool
    cond_V_ok: bool
    lambda_min: float
    r0: float
    lambda_max: float
    worst_violation: tuple = (None, 0.0)   # (r, amount) of the most violated (H4)' node
    diagnostics: dict = field(default_factory=dict)

    @property
    def all_ok(self):
        return self.h1_ok and self.h2_ok and self.h3_ok and self.h4_ok and self.cond_V_ok

    def failed_checks(self):
        names = ("h1", "h2", "h3", "h4", "cond_V")
        flags = (self.h1_ok, self.h2_ok, self.h3_ok, self.h4_ok, self.cond_V_ok)
        return [n for n, ok in zip(names, flags) if not ok]

    def as_dict(self):
        return {
            "h1_ok": self.h1_ok, "h2_ok": self.h2_ok, "h3_ok": self.h3_ok,
            "h4_ok": self.h4_ok, "cond_V_ok": self.cond_V_ok, "all_ok": self.all_ok,
            "lambda_min": self.lambda_min, "r0": self.r0, "lambda_max": self.lambda_max,
            "worst_violation": {"r": self.worst_violation[0], "amount": self.worst_violation[1]},
            "diagnostics": self.diagnostics,
        }


def check_hypotheses(spec, grid, eigen=None):
    r = grid.r
    V = spec.sample_V(grid)
    Q = spec.sample_Q(grid)
    diag = {}

    finite = bool(np.all(np.isfinite(V)) and np.all(np.isfinite(Q)))
    diag["V_sign"] = _sign_structure(V) if finite else "non-finite"
    diag["Q_sign"] = _sign_structure(Q) if finite else "non-finite"
    diag["sup_abs_V"] = float(np.max(np.abs(V))) if finite else np.inf
    diag["sup_abs_Q"] = float(np.max(np.abs(Q))) if finite else np.inf
    h1 = finite

    n_tail = max(1, int(round(H2_TAIL_FRACTION * grid.size)))
    liminf = float(np.min(V[-n_tail:]))
    diag["V_tail_liminf"] = liminf
    h2 = abs(liminf - spec.V_inf) <= H2_TOL

    if eigen is None:
        eigen = ground_state(RadialField(grid, V))
    lam_min = eigen.lambda_min
    h3 = lam_min < 0 and lam_min < spec.V_inf

    gap = h4_gap(spec, r)
    bound = h4_bound(spec, r)
    raw = bound - Q
    slack = 1e-12 * (1.0 + np.abs(Q) + np.abs(bound))
    h4 = bool(np.all(raw >= -slack))
    i_worst = int(np.argmin(gap))
    worst = (float(r[i_worst]), float(gap[i_worst]))
    diag["h4_min_gap"] = float(gap[i_worst])

    cond_applicable = spec.V_inf == 0 and spec.p >= 1.0 + 1.0 / spec.alpha
    diag["cond_V_applicable"] = bool(cond_applicable)
    if cond_applicable:
        r2V = r[-COND_V_NODES:] ** 2 * V[-COND_V_NODES:]
        threshold = 2.0 * spec.alpha * (2.0 * spec.alpha - 1.0)
        diag["r2V_tail_min"] = float(np.min(r2V))
        cond_V = bool(np.all(r2V > threshold))
    else:
        cond_V = True

    lmax = lambda_max(spec, lam_min) if lam_min < 0 else 0.0
    return HypothesisReport(
        h1_ok=h1, h2_ok=bool(h2), h3_ok=bool(h3), h4_ok=h4, cond_V_ok=cond_V,
        lambda_min=float(lam_min), r0=float(sign_change_radius(spec.alpha, spec.theta)),
        lambda_max=float(lmax),
        worst_violation=worst if worst[1] < 0 else (None, 0.0),
        diagnostics=diag,
    )


@dataclass(frozen=True)
class SubsolutionParams:
    M: float
    delta_lambda: float
    eps_lambda: float          # np.inf when M == 0
    eps0: float
    ordering_margin: float


def eps_lambda_from(delta_lambda, M, p):
    """Largest eps with delta_lambda <= -eps^(p-1) M."""
    if M == 0:
        return np.inf
    return (-delta_lambda / M) ** (1.0 / (p - 1.0))


def subsolution_params(eigen, spec, grid):
    lam_min = eigen.lambda_min
    if not lam_min < 0:
        raise LambdaOutOfRangeError(spec.lam, 0.0)
    lmax = lambda_max(spec, lam_min)
    if not (0 <= spec.lam < lmax):
        raise LambdaOutOfRangeError(spec.lam, lmax)
    check_same_grid(eigen.chi, grid.zeros())
    delta = spec.lam * spec_potential_bound(spec) + lam_min
    chi = np.asarray(eigen.chi.values)
    Q = spec.sample_Q(grid)
    psi = np.asarray(supersolution(spec, grid).values)
    M = M_SAFETY * max(0.0, float(np.max(-Q * positive_power(chi, spec.p - 1.0))))
    eps_l = eps_lambda_from(delta, M, spec.p)
    pos = chi > 0
    eps0 = min(0.5 * eps_l, RATIO_SAFETY * float(np.min(psi[pos] / chi[pos])))
    margin = float(np.min(psi - eps0 * chi))
    return SubsolutionParams(M=M, delta_lambda=delta, eps_lambda=eps_l, eps0=eps0,
                             ordering_margin=margin)


@dataclass(frozen=True)
class OrderingReport:
    ordering_ok: bool
    super_ok: bool
    sub_ok: bool
    ordering_worst: tuple     # (r, min(sup - sub))
    super_worst: tuple        # (r, most negative supersolution slack)
    sub_worst: tuple          # (r, most negative subsolution slack)

    @property
    def all_ok(self):
        return self.ordering_ok and self.super_ok and self.sub_ok


def _terms(v, spec, grid):
    vals = np.asarray(v.values)
    lap = np.asarray(apply_laplacian(v).values)
    V = spec.sample_V(grid)
    Q = spec.sample_Q(grid)
    vp = positive_power(vals, spec.p)
    return vals, lap, V * vals, Q * vp


def verify_ordered_pair(sub, sup, spec, grid, rel_tol=1e-6):
    """Pointwise check that (sub, sup) is an ordered sub/supersolution pair.

    The potential enters with its extremal values: 0 for the supersolution and
    the bound a^2/(2 theta^2 (2 alpha - 1)) for the sub-solution.
    """
    check_same_grid(sub, sup)
    r = grid.r
    order = np.asarray(sup.values) - np.asarray(sub.values)
    i_o = int(np.argmin(order))

    s, lap_s, Vs, Qs = _terms(sup, spec, grid)
    sup_slack = -lap_s + Vs - Qs
    sup_scale = 1.0 + np.max(np.abs(lap_s) + np.abs(Vs) + np.abs(Qs))
    i_p = int(np.argmin(sup_slack))

    bound = spec_potential_bound(spec)
    b, lap_b, Vb, Qb = _terms(sub, spec, grid)
    pot = spec.lam * bound * b
    sub_slack = Qb - (-lap_b + Vb + pot)
    sub_scale = 1.0 + np.max(np.abs(lap_b) + np.abs(Vb) + np.abs(Qb) + np.abs(pot))
    i_b = int(np.argmin(sub_slack))

    return OrderingReport(
        ordering_ok=bool(order[i_o] >= 0),
        super_ok=bool(sup_slack[i_p] >= -rel_tol * sup_scale),
        sub_ok=bool(sub_slack[i_b] >= -rel_tol * sub_scale),
        ordering_worst=(float(r[i_o]), float(order[i_o])),
        super_worst=(float(r[i_p]), float(sup_slack[i_p])),
        sub_worst=(float(r[i_b]), float(sub_slack[i_b])),
    )
