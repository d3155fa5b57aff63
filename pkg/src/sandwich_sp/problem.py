"""Problem data: exponents, coupling, and the potentials V and Q.

V and Q are stored as vectorised callables of r so they can be sampled on any
grid and evaluated at off-grid points such as r0.
"""
from dataclasses import dataclass, field, replace

import numpy as np

FAMILIES = ("example_1_1", "example_1_2", "finite_well", "custom")
AUTO_B_CANDIDATES = (2.0, 3.0, 5.0, 8.0, 13.0, 21.0)
AUTO_B_DEPTH = -0.05


def h_profile(alpha, theta, r):
    """theta^2 H(theta r) with H(r) = 2 alpha [(2 alpha - 1) r^2 - 3] (1 + r^2)^-2."""
    s2 = (theta * np.asarray(r, dtype=float)) ** 2
    return theta * theta * 2.0 * alpha * ((2.0 * alpha - 1.0) * s2 - 3.0) / (1.0 + s2) ** 2


def sign_change_radius(alpha, theta=1.0):
    """r0 = sqrt(3 / (2 alpha - 1)) / theta, the zero of theta^2 H(theta r)."""
    return np.sqrt(3.0 / (2.0 * alpha - 1.0)) / theta


def example_q_constant(alpha, p):
    """((2 alpha + 2) / (2 alpha - 1))^(alpha (p - 1)), which equals (1 + r0^2)^(alpha (p - 1))."""
    return ((2.0 * alpha + 2.0) / (2.0 * alpha - 1.0)) ** (alpha * (p - 1.0))


@dataclass(frozen=True)
class ProblemSpec:
    alpha: float
    p: float
    V: object
    Q: object
    lam: float = 0.0
    theta: float = 1.0
    a: float = 1.0
    V_inf: float = 0.0
    family: str = "custom"
    family_params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.alpha > 0.75:
            raise ValueError(f"alpha must exceed 3/4, got {self.alpha!r}")
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p!r}")
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta!r}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a!r}")
        if not self.lam >= 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam!r}")
        if not self.V_inf >= 0:
            raise ValueError(f"V_inf must be nonnegative, got {self.V_inf!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def sample_V(self, grid):
        return np.broadcast_to(np.asarray(self.V(grid.r), dtype=float), (grid.size,)).copy()

    def sample_Q(self, grid):
        return np.broadcast_to(np.asarray(self.Q(grid.r), dtype=float), (grid.size,)).copy()

    def with_lambda(self, lam):
        return replace(self, lam=float(lam))

    def with_Q(self, Q, family="custom"):
        return replace(self, Q=Q, family=family)

    @property
    def r0(self):
        return sign_change_radius(self.alpha, self.theta)


# ---------------------------------------------------------------------------
# families

def _check_family(alpha, p, b):
    # before c is formed: alpha = 1/2 would divide by zero there
    if not alpha > 0.75:
        raise ValueError(f"alpha must exceed 3/4, got {alpha!r}")
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p!r}")
    if not b > 1:
        raise ValueError(f"b must exceed 1, got {b!r}")


def _bH(alpha, b):
    return lambda r: b * h_profile(alpha, 1.0, r)


def example_1_1(alpha=1.0, p=3.0, b=2.0, beta=0.0, lam=0.0):
    """V = b H; Q = (b-1) c H - beta r^2/(1+r^2), i.e. the bound minus a profile tending to beta.

    beta = 0 is the equality case of the bound.
    """
    _check_family(alpha, p, b)
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta!r}")
    c = example_q_constant(alpha, p)

    def Q(r):
        r = np.asarray(r, dtype=float)
        return (b - 1.0) * c * h_profile(alpha, 1.0, r) - beta * r * r / (1.0 + r * r)

    return ProblemSpec(alpha=alpha, p=p, V=_bH(alpha, b), Q=Q, lam=lam,
                       family="example_1_1", family_params={"b": b, "beta": beta})


def example_1_2(alpha=1.0, p=3.0, b=2.0, lam=0.0):
    """V = b H, Q = (b-1) c H; the (H4) inequality is tight at r0."""
    _check_family(alpha, p, b)
    c = example_q_constant(alpha, p)

    def Q(r):
        return (b - 1.0) * c * h_profile(alpha, 1.0, r)

    return ProblemSpec(alpha=alpha, p=p, V=_bH(alpha, b), Q=Q, lam=lam,
                       family="example_1_2", family_params={"b": b})


def finite_well_potential(V0, a_well):
    """-V0 inside r < a_well, 0 outside, -V0/2 on the jump (midpoint sampling)."""

    def V(r):
        r = np.asarray(r, dtype=float)
        on_edge = np.isclose(r, a_well, rtol=0.0, atol=1e-12 * max(1.0, a_well))
        return np.where(on_edge, -0.5 * V0, np.where(r < a_well, -V0, 0.0))

    return V


def finite_well(V0=4.0, a_well=1.0, q0=0.0, alpha=1.0, p=3.0, lam=0.0):
    def Q(r):
        return np.full(np.shape(r), -float(q0))

    return ProblemSpec(alpha=alpha, p=p, V=finite_well_potential(V0, a_well), Q=Q,
                       lam=lam, family="finite_well",
                       family_params={"V0": V0, "a_well": a_well, "q0": q0})


def custom(alpha, p, r_samples, V_samples, Q_samples, lam=0.0, theta=1.0, a=1.0, V_inf=0.0):
    """Tabulated V, Q, linearly interpolated and held constant past the last sample."""
    r_s = np.asarray(r_samples, dtype=float)
    V_s = np.asarray(V_samples, dtype=float)
    Q_s = np.asarray(Q_samples, dtype=float)
    if not (r_s.shape == V_s.shape == Q_s.shape) or r_s.ndim != 1:
        raise ValueError("r, V, Q samples must be 1-D arrays of equal length")
    if np.any(np.diff(r_s) <= 0):
        raise ValueError("r samples must be strictly increasing")
    return ProblemSpec(alpha=alpha, p=p, V=lambda r: np.interp(r, r_s, V_s),
                       Q=lambda r: np.interp(r, r_s, Q_s), lam=lam, theta=theta,
                       a=a, V_inf=V_inf, family="custom")


def auto_b(alpha, grid, candidates=AUTO_B_CANDIDATES, depth=AUTO_B_DEPTH):
    """Smallest b in ``candidates`` whose well b H has ground energy below ``depth``."""
    from .spectrum import ground_state

    for b in candidates:
        lam_min = ground_state(grid.sample(_bH(alpha, b))).lambda_min
        if lam_min < depth:
            return b
    raise ValueError(f"no b in {candidates} gives a ground state below {depth}")
