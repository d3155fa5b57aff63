import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sandwich_sp.errors import GridMismatchError
from sandwich_sp.grid import (RadialField, RadialGrid, check_same_grid, integrate_volume,
                              make_grid, norm_sobolev, radial_derivative)


def psi_sq_truncated(R):
    # 4 pi int_0^R r^2 (1 + r^2)^-2 dr
    return 4.0 * np.pi * 0.5 * (np.arctan(R) - R / (1.0 + R * R))


def test_make_grid_spacing_and_nodes():
    g = make_grid(10, 100)
    assert g.h == pytest.approx(0.1)
    assert g.r[50] == pytest.approx(5.0, abs=1e-14)
    assert g.r[0] == 0.0 and g.r[-1] == 10.0
    assert np.allclose(np.diff(g.r), g.h, rtol=0, atol=1e-12)
    assert make_grid(200, 20000).h == pytest.approx(0.01)


@pytest.mark.parametrize("args", [(-1, 100), (0, 100), (10, 15), (10, 16.5), (np.inf, 100)])
def test_make_grid_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        make_grid(*args)


def test_grid_is_hashable_and_immutable():
    g = make_grid(10, 100)
    assert g == RadialGrid(10.0, 100) and hash(g) == hash(RadialGrid(10.0, 100))
    with pytest.raises(ValueError):
        g.r[3] = 1.0


def test_field_validation():
    g = make_grid(1, 16)
    with pytest.raises(ValueError):
        RadialField(g, np.ones(5))
    with pytest.raises(ValueError):
        RadialField(g, np.r_[np.ones(16), np.nan])
    f = g.field(np.ones(17))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_grid_mismatch():
    a = make_grid(1, 16).zeros()
    b = make_grid(2, 16).zeros()
    with pytest.raises(GridMismatchError):
        check_same_grid(a, b)
    with pytest.raises(GridMismatchError):
        a + b


def test_integrate_unit_ball_volume():
    g = make_grid(1, 100)
    assert abs(integrate_volume(g.sample(lambda r: np.ones_like(r))) - 4 * np.pi / 3) <= 1e-10
    assert integrate_volume(g.zeros()) == 0.0


def test_integrate_psi_squared_against_truncated_closed_form():
    # the untruncated value is pi^2; the part beyond r_max = 200 is about 4 pi / 200
    g = make_grid(200, 20000)
    val = integrate_volume(g.sample(lambda r: (1 + r * r) ** -2.0))
    assert abs(val - psi_sq_truncated(200.0)) <= 1e-9
    assert abs(val + 4 * np.pi / 200.0 - np.pi ** 2) <= 1e-3


@pytest.mark.parametrize("m", [0, 1])
def test_simpson_exact_for_low_powers(m):
    g = make_grid(3.0, 16)
    exact = 4 * np.pi * 3.0 ** (m + 3) / (m + 3)
    assert integrate_volume(g.sample(lambda r: r ** m)) == pytest.approx(exact, rel=1e-13)


def test_simpson_error_for_r_squared_matches_theory():
    # integrand r^4: composite Simpson error is -(b - a) h^4 f''''/180 = -R h^4 24/180
    R, n = 3.0, 16
    g = make_grid(R, n)
    exact = 4 * np.pi * R ** 5 / 5
    predicted = 4 * np.pi * R * g.h ** 4 * 24 / 180
    assert integrate_volume(g.sample(lambda r: r ** 2)) - exact == pytest.approx(predicted, rel=1e-9)


def test_simpson_needs_even_n():
    with pytest.raises(ValueError):
        integrate_volume(make_grid(1, 17).zeros())


def test_quadrature_convergence_order():
    def f(r):
        return np.exp(-r * r) * np.cos(r)

    ref = integrate_volume(make_grid(8, 8192).sample(f))
    e1 = abs(integrate_volume(make_grid(8, 16).sample(f)) - ref)
    e2 = abs(integrate_volume(make_grid(8, 32).sample(f)) - ref)
    assert np.log2(e1 / e2) >= 3


def test_norm_sobolev_zero_and_q():
    g = make_grid(10, 100)
    for order in (0, 1, 2):
        assert norm_sobolev(g.zeros(), order, 2) == 0.0
    with pytest.raises(ValueError):
        norm_sobolev(g.zeros(), 1, 1.5)


def test_norm_psi_l2_and_h1():
    g = make_grid(200, 20000)
    psi = g.sample(lambda r: 1 / (1 + r * r))
    assert abs(norm_sobolev(psi, 0, 2) - np.sqrt(psi_sq_truncated(200.0))) <= 1e-9
    assert abs(norm_sobolev(psi, 0, 2) - np.sqrt(np.pi ** 2 - 4 * np.pi / 200.0)) <= 1e-3
    # |psi'|^2 = 4 r^2 (1 + r^2)^-4 integrates to pi^2 / 2 over R^3
    h1_sq = norm_sobolev(psi, 1, 2) ** 2 - norm_sobolev(psi, 0, 2) ** 2
    assert h1_sq == pytest.approx(np.pi ** 2 / 2, rel=1e-5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1, 2]), st.floats(2.0, 6.0))
def test_norm_homogeneity(seed, order, q):
    g = make_grid(5, 64)
    u = g.field(np.random.default_rng(seed).standard_normal(g.size))
    assert norm_sobolev(u * 2.0, order, q) == pytest.approx(2.0 * norm_sobolev(u, order, q), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_norm_monotone_in_pointwise_order(seed):
    g = make_grid(5, 64)
    rng = np.random.default_rng(seed)
    v = rng.random(g.size)
    u = v * rng.random(g.size)
    assert norm_sobolev(g.field(u), 0, 2) <= norm_sobolev(g.field(v), 0, 2)


def test_radial_derivative():
    g = make_grid(4, 400)
    d = radial_derivative(g.sample(lambda r: r ** 2)).values
    assert d[0] == 0.0
    assert np.allclose(d, 2 * g.r, atol=1e-10)
