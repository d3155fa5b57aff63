import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import dblquad

from sandwich_sp.grid import make_grid
from sandwich_sp.poisson import (newtonian_potential, poisson_residual, potential_bound,
                                 psi_tail)


def ball_density(g):
    # u = 1 inside the unit ball; u^2 = 1/2 on the sphere itself
    return g.sample(lambda r: np.where(np.isclose(r, 1.0), np.sqrt(0.5), np.where(r < 1, 1.0, 0.0)))


def ball_potential(r):
    r = np.asarray(r, dtype=float)
    return np.where(r <= 1, 0.5 - r * r / 6.0, 1.0 / (3.0 * np.maximum(r, 1e-300)))


def ball_potential_3d(R0):
    # (4 pi)^-1 int_{|y|<1} |x - y|^-1 dy with |x| = R0, in spherical coordinates about x
    val, _ = dblquad(lambda mu, s: s * s / np.sqrt(max(R0 * R0 + s * s - 2 * R0 * s * mu, 1e-300)),
                     0, 1, -1, 1, epsabs=1e-11, epsrel=1e-11)
    return 0.5 * val


@pytest.mark.parametrize("R0", [0.0, 0.5, 1.0, 2.0, 2.5])
def test_ball_closed_form_matches_3d_quadrature(R0):
    assert ball_potential_3d(R0) == pytest.approx(float(ball_potential(R0)), abs=1e-9)


def test_unit_ball_potential_on_grid():
    g = make_grid(3, 3000)
    phi = newtonian_potential(ball_density(g)).values
    # truncation at r_max = 3 is exact here: the density vanishes outside r = 1
    assert np.max(np.abs(phi - ball_potential(g.r))) <= 1e-6
    for r0, ref in ((0.0, 0.5), (1.0, 1 / 3), (2.0, 1 / 6)):
        i = int(round(r0 / g.h))
        assert abs(phi[i] - ref) <= 1e-6


def test_zero_density():
    g = make_grid(10, 100)
    for rule in ("trapezoid", "simpson"):
        assert np.all(newtonian_potential(g.zeros(), rule=rule).values == 0.0)


def test_unknown_rule():
    with pytest.raises(ValueError):
        newtonian_potential(make_grid(10, 100).zeros(), rule="midpoint")


@pytest.mark.parametrize("alpha", [0.8, 1.0, 1.5])
def test_psi_potential_at_origin(alpha):
    g = make_grid(200, 20000)
    u = g.sample(lambda r: (1 + r * r) ** -alpha)
    phi = newtonian_potential(u, rule="simpson", psi_params=(alpha, 1.0, 1.0))
    bound = 1 / (2 * (2 * alpha - 1))
    assert potential_bound(alpha) == bound
    assert abs(phi.values[0] - bound) <= 1e-5 * bound


def test_psi_tail_closed_form():
    from scipy.integrate import quad

    for alpha, theta, a in ((1.0, 1.0, 1.0), (1.5, 0.7, 2.0)):
        num, _ = quad(lambda s: s * (a * (1 + theta ** 2 * s * s) ** -alpha) ** 2, 5.0, np.inf)
        assert psi_tail(alpha, theta, a, 5.0) == pytest.approx(num, rel=1e-10)
        assert psi_tail(alpha, theta, a, 0.0) == pytest.approx(potential_bound(alpha, theta, a))


def test_trapezoid_potential_solves_discrete_poisson():
    g = make_grid(50, 5000)
    u = g.sample(lambda r: (1 + r * r) ** -1.0)
    phi = newtonian_potential(u)
    assert np.max(np.abs(poisson_residual(phi, u).values[:-1])) <= 1e-9


def test_simpson_potential_residual_second_order():
    errs = []
    for n in (1000, 2000, 4000):
        g = make_grid(20, n)
        u = g.sample(lambda r: (1 + r * r) ** -1.0)
        errs.append(np.max(np.abs(poisson_residual(newtonian_potential(u, rule="simpson"), u).values[:-1])))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.8)


def test_residual_trivial_cases():
    g = make_grid(2, 200)
    c = g.sample(lambda r: np.full_like(r, 0.3))
    assert np.max(np.abs(poisson_residual(c, g.zeros()).values)) <= 1e-11
    phi = g.sample(lambda r: 0.5 - r * r / 6.0)
    one = g.sample(lambda r: np.ones_like(r))
    res = poisson_residual(phi, one).values
    assert np.max(np.abs(res[g.r < 1])) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.8, 2.0))
def test_bound_positivity_monotonicity_scaling(seed, alpha):
    g = make_grid(100, 2000)
    rng = np.random.default_rng(seed)
    psi = (1 + g.r ** 2) ** -alpha
    u = g.field(psi * (0.05 + 0.95 * rng.random(g.size)))
    phi = newtonian_potential(u).values
    assert np.max(phi) <= potential_bound(alpha) + 1e-8
    assert np.all(phi > 0)
    assert np.all(np.diff(phi) < 0)
    assert np.allclose(newtonian_potential(u * 3.0).values, 9.0 * phi, rtol=1e-11, atol=0)
