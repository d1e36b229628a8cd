"""Tests for the free propagator, Duhamel integrals and the split-step solver"""

import math

import numpy as np
import pytest

from src.evolution.duhamel import (
    Quadrature,
    duhamel_integral,
    duhamel_trilinear,
    phase_function,
    phase_function_factored,
)
from src.evolution.propagator import PropagatorCache, evolve_linear, free_trajectory, phase_multipliers
from src.evolution.split_step import split_step_reference
from src.expansion.towers import build_zeta_terms
from src.spectral.grid import FieldTrajectory, SpectralField, TimeGrid
from src.spectral.norms import l2_norm
from src.utils.errors import GridMismatchError, InvalidQuadrupleError

from .conftest import low_mode_field, plane_waves


def _duhamel_error(grid, nodes, quadrature):
    """Relative error of I(e1, e2, e3)(T) against (e^{iT Phi} - 1) / (i Phi)"""
    T = 0.5
    tg = TimeGrid(T, nodes)
    u1, u2, u3 = (
        free_trajectory(SpectralField.plane_wave(grid, mode), tg)
        for mode in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    )
    out = duhamel_trilinear(u1, u2, u3, quadrature=quadrature).snapshot(-1)
    xi = np.array([1.0, -1.0, 1.0])
    phi = phase_function(xi, (1, 0, 0), (0, 1, 0), (0, 0, 1))
    exact = -1j * np.exp(-1j * T * (xi @ xi)) * (np.exp(1j * T * phi) - 1.0) / (1j * phi) * grid.M ** 1.5
    got = out.coefficients[grid.index_of((1, -1, 1))]
    return abs(got - exact) / abs(exact)


class TestPropagator:
    """S(t) = exp(it Laplacian)"""

    def test_unitary(self, grid16):
        f = low_mode_field(grid16, radius=4)
        assert l2_norm(evolve_linear(f, 0.7)) == pytest.approx(l2_norm(f), rel=1e-12)

    def test_group_property(self, grid16):
        f = low_mode_field(grid16, radius=3)
        assert evolve_linear(evolve_linear(f, 0.2), 0.3).allclose(evolve_linear(f, 0.5), atol=1e-10)

    def test_plane_wave_phase(self, grid8):
        f = SpectralField.plane_wave(grid8, (1, 1, 0))
        out = evolve_linear(f, 0.25)
        idx = grid8.index_of((1, 1, 0))
        assert out.coefficients[idx] == pytest.approx(np.exp(-0.5j) * grid8.M ** 1.5)

    def test_free_trajectory_starts_at_data(self, grid8, short_time):
        f = low_mode_field(grid8)
        traj = free_trajectory(f, short_time)
        assert traj.snapshot(0).allclose(f)
        assert traj.snapshot(4).allclose(evolve_linear(f, short_time.times[4]), atol=1e-12)

    def test_phase_multiplier_signs(self, grid8):
        times = np.array([0.0, 0.3])
        forward = phase_multipliers(grid8, times)
        backward = phase_multipliers(grid8, times, sign=1.0)
        np.testing.assert_allclose(forward * backward, 1.0)

    def test_cache_is_bounded(self, grid8):
        cache = PropagatorCache(grid8, max_entries=2)
        for tau in (0.1, 0.2, 0.3):
            cache.multiplier(tau)
        assert len(cache) == 2
        assert not cache.multiplier(0.3).flags.writeable


class TestPhaseFunction:
    """Resonance modulation"""

    def test_factored_form_agrees(self):
        xi1, xi2, xi3 = (3.0, 1.0, -2.0), (0.5, 0.0, 1.0), (-1.0, 2.0, 0.0)
        xi = tuple(a - b + c for a, b, c in zip(xi1, xi2, xi3))
        assert phase_function(xi, xi1, xi2, xi3) == pytest.approx(phase_function_factored(xi, xi1, xi2, xi3))

    def test_rejects_invalid_quadruple(self):
        with pytest.raises(InvalidQuadrupleError):
            phase_function((1, 0, 0), (1, 0, 0), (1, 0, 0), (0, 1, 0))

    def test_rejects_wrong_dimension(self):
        with pytest.raises(InvalidQuadrupleError):
            phase_function((1, 0), (1, 0), (0, 0), (0, 0))


class TestDuhamel:
    """Duhamel integrals against the plane-wave closed form"""

    def test_gauss_legendre_matches_closed_form(self, grid8):
        assert _duhamel_error(grid8, 257, Quadrature.GAUSS_LEGENDRE) <= 1e-8

    def test_trapezoid_second_order(self, grid8):
        coarse = _duhamel_error(grid8, 33, Quadrature.TRAPEZOID)
        fine = _duhamel_error(grid8, 65, Quadrature.TRAPEZOID)
        assert math.log2(coarse / fine) >= 1.9

    def test_resonant_linear_growth(self, grid8):
        a = 0.5
        T = 0.4
        tg = TimeGrid(T, 5)
        z = free_trajectory(SpectralField.plane_wave(grid8, (1, 0, 0), a), tg)
        out = duhamel_trilinear(z, z, z).snapshot(-1)
        expected = -1j * T * a ** 3 * np.exp(-1j * T) * grid8.M ** 1.5
        assert out.coefficients[grid8.index_of((1, 0, 0))] == pytest.approx(expected, rel=1e-10)

    def test_vanishes_at_zero(self, grid8, short_time):
        z = free_trajectory(low_mode_field(grid8), short_time)
        out = duhamel_trilinear(z, z, z)
        assert np.all(out.data[0] == 0)

    def test_gauss_legendre_needs_four_nodes(self, grid8):
        forcing = FieldTrajectory.zeros(grid8, TimeGrid(0.1, 3))
        with pytest.raises(ValueError):
            duhamel_integral(forcing, Quadrature.GAUSS_LEGENDRE)

    def test_time_grid_mismatch(self, grid8, short_time):
        z = free_trajectory(low_mode_field(grid8), short_time)
        with pytest.raises(GridMismatchError):
            duhamel_trilinear(z, z, z, time_grid=TimeGrid(1.0, 9))


class TestSplitStep:
    """Strang splitting reference solver"""

    def test_mass_conserved(self, grid16):
        u0 = low_mode_field(grid16, radius=2, amplitude=0.5)
        traj = split_step_reference(u0, TimeGrid(0.05, 11))
        masses = [l2_norm(s) for s in traj.snapshots]
        np.testing.assert_allclose(masses, masses[0], rtol=1e-12)

    def test_linear_mode_is_free_flow(self, grid16):
        u0 = low_mode_field(grid16, radius=3)
        tg = TimeGrid(0.1, 6)
        traj = split_step_reference(u0, tg, nonlinear=False)
        np.testing.assert_allclose(traj.data, free_trajectory(u0, tg).data, atol=1e-10)

    def test_small_data_matches_third_order_expansion(self, grid16):
        tg = TimeGrid(0.1, 33)
        u0 = plane_waves(grid16, [(1, 0, 0), (0, 1, 0), (-1, 0, 1)], amplitude=0.2)
        reference = split_step_reference(u0, tg, substeps=4)
        expansion = build_zeta_terms(free_trajectory(u0, tg), 2)
        z3 = expansion.term(3).snapshot(-1)
        diff = reference.snapshot(-1) - expansion.total().snapshot(-1)
        assert l2_norm(diff) <= 0.1 * l2_norm(z3)

    def test_rejects_bad_substeps(self, grid8):
        with pytest.raises(ValueError):
            split_step_reference(SpectralField.zeros(grid8), TimeGrid(0.1, 3), substeps=0)
