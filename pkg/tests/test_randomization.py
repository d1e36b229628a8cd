"""Tests for Wiener windows, coefficient laws and counter-based randomization"""

import math

import numpy as np
import pytest

from src.experiments.data import ball_data
from src.randomization.laws import (
    RandomLaw,
    exact_exponential_moment,
    exponential_moment_constant,
    sample_units,
)
from src.randomization.wiener import (
    EnsembleSpec,
    cube_coefficient,
    occupied_cubes,
    randomize_ensemble,
    randomized_data,
    wiener_randomize,
)
from src.randomization.windows import WindowKind, WindowSpec, home_cubes, partition_error, window_weight
from src.spectral.grid import GridSpec, SpectralField
from src.spectral.norms import l2_norm

from .conftest import low_mode_field


SHARP = WindowSpec(WindowKind.SHARP_CUBE)
SMOOTH = WindowSpec(WindowKind.SMOOTH_BUMP, 0.25)


class TestWindows:
    """Partition of unity over the frequency lattice"""

    @pytest.mark.parametrize("spec", [SHARP, SMOOTH])
    @pytest.mark.parametrize("R", [1, 2, 3])
    def test_partition_of_unity(self, spec, R):
        assert partition_error(GridSpec(8, R), spec) <= 1e-12

    def test_sharp_window_is_half_open(self):
        assert window_weight((0.5, 0.0, 0.0), (0, 0, 0), SHARP) == 1.0
        assert window_weight((-0.5, 0.0, 0.0), (0, 0, 0), SHARP) == 0.0
        assert window_weight((-0.5, 0.0, 0.0), (-1, 0, 0), SHARP) == 1.0

    def test_smooth_window_profile(self):
        assert window_weight((0.2, -0.2, 0.0), (0, 0, 0), SMOOTH) == 1.0
        assert window_weight((0.75, 0.0, 0.0), (0, 0, 0), SMOOTH) == 0.0
        assert window_weight((0.5, 0.0, 0.0), (0, 0, 0), SMOOTH) == pytest.approx(0.5)

    def test_home_cubes(self):
        grid = GridSpec(8, 2)
        # frequencies -2, -1.5, ..., 1.5
        np.testing.assert_array_equal(grid.axis_frequencies - home_cubes(grid) > -0.5, True)
        np.testing.assert_array_equal(grid.axis_frequencies - home_cubes(grid) <= 0.5, True)

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            WindowSpec(WindowKind.SMOOTH_BUMP, 0.5)
        with pytest.raises(ValueError):
            WindowSpec(WindowKind.SMOOTH_BUMP, 0.0)


class TestLaws:
    """Mean-zero unit-variance coefficient laws"""

    @pytest.mark.parametrize("law", list(RandomLaw))
    def test_moments(self, law):
        g = sample_units(law, np.random.default_rng(5), 200_000)
        assert abs(np.mean(g)) < 0.01
        assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, abs=0.01)

    def test_uniform_circle_is_unimodular(self):
        g = sample_units(RandomLaw.UNIFORM_CIRCLE, np.random.default_rng(0), 1000)
        np.testing.assert_allclose(np.abs(g), 1.0)

    def test_exact_exponential_moments(self):
        assert exact_exponential_moment(RandomLaw.COMPLEX_GAUSSIAN, 2.0) == pytest.approx(math.e)
        assert exact_exponential_moment(RandomLaw.UNIFORM_CIRCLE, 0.0) == pytest.approx(1.0)

    def test_gaussian_exponential_constant(self):
        kappas = [0.5, 1.0j, 1.0 + 1.0j, 2.0]
        c = exponential_moment_constant(RandomLaw.COMPLEX_GAUSSIAN, kappas, samples=200_000, seed=1)
        assert c == pytest.approx(0.25, abs=0.02)

    def test_uniform_circle_constant_below_gaussian(self):
        kappas = [1.0, 2.0]
        c = exponential_moment_constant(RandomLaw.UNIFORM_CIRCLE, kappas, samples=100_000, seed=2)
        assert c <= 0.26


class TestWienerRandomization:
    """Cube-by-cube randomization with reproducible draws"""

    def test_occupied_cubes_of_a_plane_wave(self, grid8):
        phi = SpectralField.plane_wave(grid8, (2, 0, 0))
        assert occupied_cubes(phi) == [(2, 0, 0)]

    def test_smooth_window_reaches_neighbour_cubes(self):
        grid = GridSpec(8, 2)
        phi = SpectralField.plane_wave(grid, (1, 0, 0))  # xi = (1/2, 0, 0) on a cube face
        cubes = occupied_cubes(phi, SMOOTH)
        assert (0, 0, 0) in cubes and (1, 0, 0) in cubes

    def test_deterministic(self, grid8):
        phi = low_mode_field(grid8, radius=2)
        a = wiener_randomize(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=11, member=3)
        b = wiener_randomize(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=11, member=3)
        np.testing.assert_array_equal(a.coefficients, b.coefficients)

    def test_members_differ(self, grid8):
        phi = low_mode_field(grid8, radius=2)
        a = wiener_randomize(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=11, member=0)
        b = wiener_randomize(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=11, member=1)
        assert not a.allclose(b, atol=1e-6)

    def test_draws_do_not_depend_on_support(self, grid8):
        small = SpectralField.plane_wave(grid8, (1, 0, 0))
        large = low_mode_field(grid8, radius=2)
        idx = grid8.index_of((1, 0, 0))
        g = cube_coefficient(RandomLaw.COMPLEX_GAUSSIAN, 4, 0, (1, 0, 0))
        a = wiener_randomize(small, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=4)
        b = wiener_randomize(large, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=4)
        assert a.coefficients[idx] == pytest.approx(g * small.coefficients[idx])
        assert b.coefficients[idx] == pytest.approx(g * large.coefficients[idx])

    def test_unit_draws_reproduce_data(self, grid8):
        phi = low_mode_field(grid8, radius=3)
        for spec in (SHARP, SMOOTH):
            out = wiener_randomize(phi, spec, RandomLaw.COMPLEX_GAUSSIAN, seed=0, draws=lambda cube: 1.0)
            assert out.allclose(phi, atol=1e-10)

    def test_uniform_circle_preserves_sharp_modulus(self, grid8):
        phi = low_mode_field(grid8, radius=2)
        out = wiener_randomize(phi, SHARP, RandomLaw.UNIFORM_CIRCLE, seed=9)
        np.testing.assert_allclose(np.abs(out.coefficients), np.abs(phi.coefficients), atol=1e-12)

    def test_support_is_preserved(self, grid8):
        phi = SpectralField.zeros(grid8)
        assert occupied_cubes(phi) == []
        out = wiener_randomize(phi, SMOOTH, RandomLaw.COMPLEX_GAUSSIAN, seed=1)
        assert np.all(out.coefficients == 0)

    def test_mean_square_norm(self, grid16):
        phi = ball_data(grid16, 3.0)
        ensemble = EnsembleSpec(RandomLaw.COMPLEX_GAUSSIAN, master_seed=21, count=200)
        ratios = [l2_norm(f) ** 2 / l2_norm(phi) ** 2 for _, f in randomize_ensemble(phi, SHARP, ensemble)]
        assert np.mean(ratios) == pytest.approx(1.0, abs=0.05)

    def test_randomized_data_keeps_v0(self, grid8):
        phi = low_mode_field(grid8, radius=1)
        v0 = SpectralField.plane_wave(grid8, (3, 0, 0), 0.5)
        out = randomized_data(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=2, v0=v0)
        randomized = wiener_randomize(phi, SHARP, RandomLaw.COMPLEX_GAUSSIAN, seed=2)
        assert (out - randomized).allclose(v0, atol=1e-12)


class TestEnsembleSpec:
    def test_rejects_empty_ensemble(self):
        with pytest.raises(ValueError):
            EnsembleSpec(count=0)

    def test_rejects_negative_seed(self):
        with pytest.raises(ValueError):
            EnsembleSpec(master_seed=-1)

    def test_members_in_order(self, grid8):
        phi = low_mode_field(grid8)
        members = [m for m, _ in randomize_ensemble(phi, SHARP, EnsembleSpec(count=3))]
        assert members == [0, 1, 2]
