"""Disk solver: oracle equivalence with the series solutions, convergence order."""

import numpy as np
import pytest

from kerrforge.disksolve import SolveGrid, fd_elliptic_solve, grid_pde_residual, interp_periodic
from kerrforge.errors import SignConditionError
from kerrforge.potentials import GridPotential, SeriesPotential


def max_deviation_from_series(grid, series):
    """max |grid - series| over lattice nodes away from the origin row."""
    r = grid.radii()[1:-1]
    w = grid.angles()
    R, W = np.meshgrid(r, w, indexing="ij")
    exact = series.evaluate((R * np.cos(W)).ravel(), (R * np.sin(W)).ravel()).phi
    return float(np.max(np.abs(grid.values[1:-1].ravel() - exact)))


def test_constant_boundary_matches_series():
    # f = -1 boundary <-> pure a_0 = 1 series data
    r_o = 0.5
    series = SeriesPotential(1, r_o, 1.0)
    grid = fd_elliptic_solve(1, np.full(64, -1.0), (32, 64), radius=r_o)
    assert max_deviation_from_series(grid, series) < 2e-4


def test_cosine_boundary_matches_series():
    # f(w) = -(1 + cos w) <-> a_0 = 1, a_1 = 1
    r_o = 0.5
    n_theta = 64
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    series = SeriesPotential(1, r_o, 1.0, a=[1.0])
    grid = fd_elliptic_solve(1, -(1.0 + np.cos(w)), (32, n_theta), radius=r_o)
    assert max_deviation_from_series(grid, series) < 5e-4


def test_negative_curvature_solve():
    r_o = 0.6
    n_theta = 64
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    series = SeriesPotential(-1, r_o, -1.0, a=[-0.5])   # boundary 1 + 0.5 cos w >= 0
    grid = fd_elliptic_solve(-1, 1.0 + 0.5 * np.cos(w), (32, n_theta), radius=r_o)
    assert max_deviation_from_series(grid, series) < 5e-4


@pytest.mark.parametrize("kappa", [1, -1])
def test_second_order_convergence(kappa):
    r_o = 0.5
    sign = -kappa  # boundary sign per the curvature
    series = SeriesPotential(kappa, r_o, -sign * 1.0, a=[-sign * 0.5])
    devs = []
    for n_r in (32, 64, 128):
        n_theta = 2 * n_r
        w = 2 * np.pi * np.arange(n_theta) / n_theta
        f = sign * (1.0 + 0.5 * np.cos(w))
        grid = fd_elliptic_solve(kappa, f, (n_r, n_theta), radius=r_o)
        devs.append(max_deviation_from_series(grid, series))
    orders = [np.log2(devs[i] / devs[i + 1]) for i in range(2)]
    assert all(1.8 <= o <= 2.2 for o in orders), (devs, orders)


def test_solution_map_is_linear():
    n_theta = 48
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    f1 = -(1.2 + np.cos(w))
    f2 = -(0.8 + 0.5 * np.sin(w))
    g1 = fd_elliptic_solve(1, f1, (24, n_theta))
    g2 = fd_elliptic_solve(1, f2, (24, n_theta))
    g12 = fd_elliptic_solve(1, f1 + f2, (24, n_theta))
    np.testing.assert_allclose(g12.values, g1.values + g2.values, rtol=0, atol=1e-10)


def test_sign_mixed_boundary_rejected():
    n_theta = 32
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    with pytest.raises(SignConditionError):
        fd_elliptic_solve(1, np.cos(w), (16, n_theta))
    with pytest.raises(SignConditionError):
        fd_elliptic_solve(1, np.zeros(n_theta), (16, n_theta))
    with pytest.raises(SignConditionError):
        fd_elliptic_solve(-1, -np.ones(n_theta), (16, n_theta))  # wrong sign for kappa=-1


def test_interior_sign_condition_after_solve():
    # discrete analogue of the maximum principle: solution stays one-signed
    n_theta = 48
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    grid = fd_elliptic_solve(1, -(1.0 + 0.9 * np.cos(w)), (24, n_theta))
    assert np.all(grid.values <= 1e-12)


def test_posteriori_residual_scales():
    n_theta = 64
    f = np.full(n_theta, -1.0)
    res_coarse = grid_pde_residual(fd_elliptic_solve(1, f, (16, n_theta)))
    res_fine = grid_pde_residual(fd_elliptic_solve(1, f, (64, n_theta)))
    assert res_fine < res_coarse


def test_grid_file_roundtrip(tmp_path):
    n_theta = 32
    grid = fd_elliptic_solve(1, np.full(n_theta, -1.0), (16, n_theta))
    path = tmp_path / "grid.txt"
    grid.save(path)
    loaded = SolveGrid.load(path)
    np.testing.assert_array_equal(loaded.values, grid.values)
    assert loaded.kappa == 1 and loaded.n_r == 16


def test_grid_potential_interpolation():
    r_o = 0.5
    series = SeriesPotential(1, r_o, 1.0, a=[1.0])
    n_theta = 128
    w = 2 * np.pi * np.arange(n_theta) / n_theta
    grid = fd_elliptic_solve(1, series.boundary_trace(w), (64, n_theta), radius=r_o)
    pot = GridPotential(grid)
    rng = np.random.default_rng(3)
    r = np.sqrt(rng.uniform(0.02, 0.9, 30)) * pot.radius
    ang = rng.uniform(0, 2 * np.pi, 30)
    x, y = r * np.cos(ang), r * np.sin(ang)
    got = pot.evaluate(x, y)
    want = series.evaluate(x, y)
    np.testing.assert_allclose(got.phi, want.phi, atol=2e-4)
    np.testing.assert_allclose(got.phi_x, want.phi_x, atol=2e-3)
    np.testing.assert_allclose(got.phi_xx, want.phi_xx, atol=2e-2)


def test_interp_periodic_wraps():
    w = np.array([0.0, np.pi])
    vals = np.array([1.0, 3.0])
    assert interp_periodic(w, vals, np.array([3 * np.pi / 2]))[0] == pytest.approx(2.0)
