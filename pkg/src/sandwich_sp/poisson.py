"""Newtonian potential of a radial density via the shell theorem.

    phi(r) = (1/r) int_0^r s^2 u^2 ds + int_r^R s u^2 ds

The default trapezoid rule makes phi satisfy the discrete Poisson equation
exactly at every node below r_max: (r phi)_{i+1} - 2 (r phi)_i + (r phi)_{i-1}
= -h^2 r_i u_i^2, and the origin value is closed by the same stencil as
``apply_laplacian``. The Simpson rule is fourth order but not discretely
consistent with the Laplacian.
"""
import numpy as np
from scipy.integrate import cumulative_simpson

from .elliptic import apply_laplacian
from .grid import RadialField, check_same_grid

RULES = ("trapezoid", "simpson")


def potential_bound(alpha, theta=1.0, a=1.0):
    """sup of the potential of psi^2, psi = a (1 + theta^2 r^2)^-alpha."""
    return a * a / (2.0 * theta * theta * (2.0 * alpha - 1.0))


def psi_tail(alpha, theta, a, r):
    """int_r^inf s psi(s)^2 ds in closed form."""
    return potential_bound(alpha, theta, a) * (1.0 + theta * theta * r * r) ** (1.0 - 2.0 * alpha)


def _cumtrapz(y, h):
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * h * (y[1:] + y[:-1]), out=out[1:])
    return out


def newtonian_potential(u, rule="trapezoid", psi_params=None):
    """phi = (4 pi |x|)^-1 * u^2 for a radial ``u``.

    ``psi_params=(alpha, theta, a)`` declares that u^2 is exactly psi^2; the
    closed-form exterior tail int_{r_max}^inf s psi^2 ds is then added at
    every node. Without it the density is taken to vanish beyond r_max.
    """
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    g = u.grid
    r, h = g.r, g.h
    v = np.asarray(u.values)
    e = r * v * v          # s u^2
    m_integrand = r * e    # s^2 u^2
    if rule == "trapezoid":
        m = _cumtrapz(m_integrand, h)
        ce = _cumtrapz(e, h)
    else:
        m = cumulative_simpson(m_integrand, dx=h, initial=0.0)
        ce = cumulative_simpson(e, dx=h, initial=0.0)
    t = ce[-1] - ce
    phi = np.empty_like(v)
    phi[1:] = m[1:] / r[1:] + t[1:]
    if rule == "trapezoid":
        phi[0] = phi[1] + h * h * v[0] * v[0] / 6.0
    else:
        phi[0] = t[0]
    if psi_params is not None:
        alpha, theta, a = psi_params
        phi = phi + psi_tail(alpha, theta, a, g.r_max)
    return RadialField(g, phi)


def poisson_residual(phi, u):
    """-Lap phi - u^2."""
    check_same_grid(phi, u)
    v = np.asarray(u.values)
    return RadialField(u.grid, -np.asarray(apply_laplacian(phi).values) - v * v)
