"""Tests for the residual Picard solver and the plug-back residual"""

import math

import numpy as np
import pytest

from src.evolution.propagator import free_trajectory
from src.expansion.towers import build_zeta_terms
from src.solver.picard import (
    SolverConfig,
    contraction_ratio,
    energy_trajectory,
    picard_solve,
    reconstruct_u,
    sup_sobolev,
    sweep_horizons,
    uniqueness_witness,
)
from src.solver.residual import discretization_floor, nls_residual, residual_profile
from src.spectral.grid import FieldTrajectory, GridSpec, SpectralField, TimeGrid
from src.utils.errors import GridMismatchError

from .conftest import low_mode_field


def _expansion(grid, amplitude, horizon=0.1, nodes=11, k=2):
    z1 = free_trajectory(low_mode_field(grid, radius=1, amplitude=amplitude, seed=3), TimeGrid(horizon, nodes))
    return build_zeta_terms(z1, k)


@pytest.fixture
def small_expansion(grid16):
    return _expansion(grid16, 2.0)


class TestSolverConfig:
    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.tolerance == 1e-10
        assert cfg.max_iterations == 50
        assert cfg.quadrature.value == "trapezoid"

    @pytest.mark.parametrize(
        "kwargs",
        [{"tolerance": 0.0}, {"max_iterations": 0}, {"depth": 0}, {"quadrature": "simpson"}],
    )
    def test_rejects_bad_settings(self, kwargs):
        with pytest.raises(ValueError):
            SolverConfig(**kwargs)


class TestPicardSolve:
    """Residual equation solves"""

    def test_small_data_converges(self, small_expansion):
        v, report = picard_solve(small_expansion, SolverConfig(tolerance=1e-12))
        assert report.converged
        assert not report.diverged
        assert report.iterations == len(report.increments)
        assert report.increments[-1] <= 1e-12
        assert report.contraction_ratio < 0.5
        assert np.all(v.data[0] == 0)

    def test_residual_of_solution_is_small(self, small_expansion):
        v, report = picard_solve(small_expansion, SolverConfig(tolerance=1e-12))
        linear_only = nls_residual(small_expansion.linear_solution)
        assert report.residual == pytest.approx(nls_residual(reconstruct_u(small_expansion, v)))
        assert report.residual < 0.1 * linear_only

    def test_large_data_is_reported_not_raised(self, grid16):
        expansion = _expansion(grid16, 20.0, horizon=0.5)
        _, report = picard_solve(expansion, SolverConfig(max_iterations=30))
        assert not report.converged
        assert report.iterations >= 1

    def test_deterministic_part_is_carried(self, small_expansion, grid16):
        v0 = SpectralField.plane_wave(grid16, (2, 0, 0), 0.01)
        v, report = picard_solve(small_expansion, SolverConfig(tolerance=1e-12, v0=v0))
        assert report.converged
        assert v.snapshot(0).allclose(v0, atol=1e-14)

    def test_depth_override(self, small_expansion):
        _, report = picard_solve(small_expansion, SolverConfig(depth=1, tolerance=1e-12))
        assert report.converged

    def test_time_grid_mismatch(self, small_expansion):
        with pytest.raises(GridMismatchError):
            picard_solve(small_expansion, SolverConfig(), time_grid=TimeGrid(1.0, 3))

    def test_v0_grid_mismatch(self, small_expansion):
        v0 = SpectralField.zeros(GridSpec(8))
        with pytest.raises(GridMismatchError):
            picard_solve(small_expansion, SolverConfig(v0=v0))

    def test_residual_can_be_skipped(self, small_expansion):
        _, report = picard_solve(small_expansion, SolverConfig(compute_residual=False))
        assert math.isnan(report.residual)

    def test_report_serializes(self, small_expansion):
        _, report = picard_solve(small_expansion, SolverConfig())
        assert set(report.to_dict()) == {
            "iterations", "increments", "residual", "discretization_floor", "contraction_ratio",
            "converged", "diverged",
        }
        assert math.isfinite(report.discretization_floor)


class TestDiagnostics:
    def test_uniqueness_witness(self, small_expansion):
        report = uniqueness_witness(small_expansion, SolverConfig(tolerance=1e-12))
        assert all(report.converged)
        assert len(report.iterations) == 3
        assert report.spread <= 1e-10

    def test_horizon_sweep(self, small_expansion):
        outcomes = sweep_horizons(small_expansion, SolverConfig(), [0.1, 0.05])
        assert [o.horizon for o in outcomes] == pytest.approx([0.05, 0.1])
        assert all(o.converged for o in outcomes)

    def test_contraction_ratio(self):
        assert contraction_ratio([1.0, 0.1, 0.01]) == pytest.approx(0.1)
        assert math.isnan(contraction_ratio([1.0]))
        assert math.isnan(contraction_ratio([0.0, 0.0]))

    def test_sup_sobolev(self, grid8):
        tg = TimeGrid(0.1, 3)
        traj = free_trajectory(SpectralField.plane_wave(grid8, (1, 0, 0)), tg)
        assert sup_sobolev(traj, 0.5) == pytest.approx(math.sqrt(2.0) ** 0.5 * math.sqrt(grid8.box_volume))

    def test_energy_trajectory(self, small_expansion):
        energies = energy_trajectory(small_expansion.linear_solution)
        assert energies.shape == (small_expansion.time_grid.nodes,)
        assert np.all(energies > 0)


class TestResidual:
    """Plug-back residual i u_t + Laplacian u - |u|^2 u"""

    def test_free_flow_has_no_linear_residual(self, grid16):
        u = free_trajectory(low_mode_field(grid16, radius=4), TimeGrid(0.2, 9))
        assert nls_residual(u, nonlinear=False) <= 1e-10

    def test_profile_length(self, grid8):
        u = free_trajectory(low_mode_field(grid8), TimeGrid(0.1, 7))
        assert residual_profile(u).shape == (5,)

    def test_needs_three_nodes(self, grid8):
        u = free_trajectory(low_mode_field(grid8), TimeGrid(0.1, 2))
        with pytest.raises(ValueError):
            nls_residual(u)

    def test_free_flow_nonlinear_residual_is_the_cubic(self, grid8):
        u = free_trajectory(SpectralField.plane_wave(grid8, (0, 0, 0), 0.5), TimeGrid(0.1, 5))
        # |u|^2 u = 0.125 at every point; H^-1 weight is 1 at the zero mode
        assert nls_residual(u) == pytest.approx(0.125 * math.sqrt(grid8.box_volume))

    def test_floor_matches_residual_of_exact_cubic_wave(self, grid8):
        tg = TimeGrid(0.2, 9)
        wave = SpectralField.plane_wave(grid8, (1, 0, 0), 0.5).coefficients
        # u = a exp(i(x.xi - t(|xi|^2 + |a|^2))) solves the cubic equation exactly
        data = np.stack([wave * np.exp(-1j * t * 1.25) for t in tg.times])
        u = FieldTrajectory(grid8, tg, data)
        residual = nls_residual(u)
        assert residual > 0
        assert discretization_floor(u) == pytest.approx(residual, rel=1e-2)

    def test_floor_needs_an_even_interval_count(self, grid8):
        u = free_trajectory(low_mode_field(grid8), TimeGrid(0.1, 4))
        assert math.isnan(discretization_floor(u))
