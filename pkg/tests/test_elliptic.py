import numpy as np
import pytest

from sandwich_sp.elliptic import (HelmholtzOperator, apply_laplacian, helmholtz_solve,
                                  interior_max, pde_residual, positive_power)
from sandwich_sp.errors import DomainError
from sandwich_sp.grid import make_grid
from sandwich_sp.problem import ProblemSpec, h_profile


def psi(r, alpha=1.0):
    return (1 + r * r) ** -alpha


def test_laplacian_of_quadratic_and_constant():
    g = make_grid(5, 100)
    lap = apply_laplacian(g.sample(lambda r: r * r)).values
    assert np.max(np.abs(lap - 6.0)) <= 1e-9
    assert np.max(np.abs(apply_laplacian(g.sample(lambda r: np.full_like(r, 3.0))).values)) == 0.0


def test_laplacian_of_psi_second_order():
    errs = []
    for n in (1000, 2000, 4000):
        g = make_grid(20, n)
        u = g.sample(psi)
        errs.append(np.max(np.abs(apply_laplacian(u).values - h_profile(1.0, 1.0, g.r) * u.values)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders > 1.8) & (orders < 2.2))


def test_self_adjoint_with_trapezoid_weights(rng):
    g = make_grid(10, 400)
    taper = np.where(g.r < 8, 1.0, 0.0)
    u = g.field(rng.standard_normal(g.size) * taper)
    v = g.field(rng.standard_normal(g.size) * taper)
    w = g.trapezoid_weights
    lhs = w @ (apply_laplacian(u).values * v.values)
    rhs = w @ (u.values * apply_laplacian(v).values)
    scale = np.sqrt(w @ u.values ** 2) * np.sqrt(w @ v.values ** 2)
    assert abs(lhs - rhs) <= 1e-6 * scale


@pytest.mark.parametrize("r_max", [10.0, 20.0, 40.0, 80.0])
@pytest.mark.parametrize("h", [0.08, 0.04, 0.02])
def test_helmholtz_manufactured_solution(r_max, h):
    # u* = psi, f = (k - H) psi; the error is C (h^2 + psi(r_max))
    k = 5.0
    g = make_grid(r_max, int(round(r_max / h)))
    exact = psi(g.r)
    f = g.field((k - h_profile(1.0, 1.0, g.r)) * exact)
    err = np.max(np.abs(helmholtz_solve(f, k).values - exact))
    assert err <= 0.5 * (h * h + psi(r_max))


def test_helmholtz_manufactured_second_order_when_boundary_negligible():
    k = 5.0
    errs = []
    for n in (1000, 2000, 4000):
        g = make_grid(160, n)
        exact = psi(g.r)
        f = g.field((k - h_profile(1.0, 1.0, g.r)) * exact)
        errs.append(np.max(np.abs(helmholtz_solve(f, k).values - exact)))
    assert np.log2(errs[0] / errs[1]) > 1.8


def test_helmholtz_zero_and_positivity(rng, numba_flag):
    g = make_grid(30, 600)
    op = HelmholtzOperator(g, 2.0, use_numba=numba_flag)
    assert np.all(op.solve(g.zeros()).values == 0.0)
    f = g.field(np.where(rng.random(g.size) < 0.05, rng.random(g.size), 0.0))
    u = op.solve(f).values
    assert np.all(u[:-1] > 0)


def test_helmholtz_linearity(rng):
    g = make_grid(10, 200)
    f1, f2 = (g.field(rng.standard_normal(g.size)) for _ in range(2))
    lhs = helmholtz_solve(f1 * 2.0 + f2 * -3.0, 4.0).values
    rhs = 2.0 * helmholtz_solve(f1, 4.0).values - 3.0 * helmholtz_solve(f2, 4.0).values
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * np.max(np.abs(rhs)))


def test_helmholtz_apply_inverts_solve(rng, numba_flag):
    g = make_grid(10, 200)
    op = HelmholtzOperator(g, 3.0, use_numba=numba_flag)
    f = g.field(rng.standard_normal(g.size))
    back = op.apply(op.solve(f)).values
    assert np.allclose(back, f.values, rtol=0, atol=1e-8 * np.max(np.abs(f.values)))


def test_helmholtz_m_matrix_structure():
    op = HelmholtzOperator(make_grid(10, 200), 1.5)
    assert np.all(op.diag > 0) and np.all(op.off <= 0)
    row_sum = op.diag.copy()
    row_sum[:-1] += op.off
    row_sum[1:] += op.off
    assert np.all(row_sum > 0)


def test_helmholtz_rejects_nonpositive_k():
    with pytest.raises(ValueError):
        HelmholtzOperator(make_grid(10, 200), 0.0)


def test_positive_power_domain():
    assert np.array_equal(positive_power(np.array([-2.0, 0.0, 3.0]), 2), [4.0, 0.0, 9.0])
    assert positive_power(np.array([0.0, 4.0]), 1.5).tolist() == [0.0, 8.0]
    with pytest.raises(DomainError):
        positive_power(np.array([-1e-3, 1.0]), 1.5)


def zero_spec(p=3.0):
    def zero(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    return ProblemSpec(alpha=1.0, p=p, V=zero, Q=zero)


def test_pde_residual_special_cases():
    g = make_grid(20, 2000)
    z = g.zeros()
    assert np.all(pde_residual(z, z, zero_spec(1.5)).values == 0.0)
    u = g.sample(psi)
    res = pde_residual(u, z, zero_spec()).values
    target = -h_profile(1.0, 1.0, g.r) * u.values
    assert np.max(np.abs(res - target)[:-1]) <= 1e-3
    with pytest.raises(DomainError):
        pde_residual(u * -1.0, z, zero_spec(1.5))


def test_interior_max_skips_outer_node():
    g = make_grid(1, 16)
    v = np.zeros(17)
    v[-1] = 5.0
    v[3] = -2.0
    assert interior_max(g.field(v)) == 2.0
