import numpy as np
import pytest

from sandwich_sp.envelopes import check_hypotheses, supersolution
from sandwich_sp.errors import GridMismatchError, SweepError
from sandwich_sp.experiments import (SweepResult, geometric_ladder, h1_distance, lambda_sweep,
                                     thread_count, uniform_bound_table)
from sandwich_sp.grid import make_grid
from sandwich_sp.problem import example_1_2


@pytest.fixture(scope="module")
def grid():
    return make_grid(100, 2000)


def test_h1_distance_properties(grid, rng):
    u = grid.field(rng.random(grid.size))
    v = grid.field(rng.random(grid.size))
    assert h1_distance(u, u) == 0.0
    assert h1_distance(u, v) == pytest.approx(h1_distance(v, u), rel=1e-14)
    with pytest.raises(GridMismatchError):
        h1_distance(u, make_grid(50, 2000).zeros())


def test_h1_distance_of_psi():
    g = make_grid(400, 40000)
    psi = supersolution(example_1_2(), g)
    # int psi^2 = pi^2, int |psi'|^2 = pi^2 / 2 over R^3; truncation removes about 4 pi / R
    R = 400.0
    truncated = np.sqrt(1.5 * np.pi ** 2 - 4 * np.pi / R)
    assert abs(h1_distance(psi, g.zeros()) - truncated) <= 1e-3


def test_geometric_ladder():
    assert geometric_ladder(3.2, 3) == [1.6, 0.8, 0.4, 0.0]


def test_ladder_zero_only(grid):
    res = lambda_sweep(example_1_2(p=1.5), grid, [0.0], max_iter=200000)
    assert res.h1_to_u0.tolist() == [0.0]
    table = uniform_bound_table(res)
    assert all(r == 1.0 for r in table.ratios.values())


def test_ladder_must_contain_zero(grid):
    with pytest.raises(ValueError):
        lambda_sweep(example_1_2(p=1.5), grid, [0.1])


def test_ladder_with_lambda_max_is_tagged(grid):
    spec = example_1_2(p=1.5)
    lmax = check_hypotheses(spec, grid).lambda_max
    with pytest.raises(SweepError) as info:
        lambda_sweep(spec, grid, [lmax, 0.0], max_iter=10, threads=1)
    assert info.value.lam == lmax


def test_small_sweep_trend(grid):
    spec = example_1_2(p=1.5)
    lmax = check_hypotheses(spec, grid).lambda_max
    res = lambda_sweep(spec, grid, geometric_ladder(lmax, 3), max_iter=200000, threads=2)
    assert np.all(np.diff(res.lambdas) < 0)
    assert np.all(np.diff(res.h1_to_u0) < 0) and res.h1_to_u0[-1] == 0.0
    for s in res.solutions:
        assert np.all(s.u.values > 0) and np.all(s.u.values <= s.sup.values)
        assert s.pde_residual_max <= s.pde_tolerance
    table = uniform_bound_table(res)
    assert max(table.ratios.values()) <= 2.0
    assert len(table.rows) == len(res.lambdas)


def test_table_empty_input():
    empty = SweepResult(lambdas=np.array([]), solutions=[], h1_to_u0=np.array([]), norm_table=[])
    with pytest.raises(ValueError):
        uniform_bound_table(empty)


def test_thread_count():
    assert thread_count({"SP_THREADS": "3"}) == 3
    assert thread_count({}) >= 1
    for bad in ("0", "x", "-2"):
        with pytest.raises(ValueError):
            thread_count({"SP_THREADS": bad})
