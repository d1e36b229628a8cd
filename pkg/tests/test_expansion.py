"""Tests for smoothing exponents and the Duhamel expansion towers"""

from fractions import Fraction

import numpy as np
import pytest

from src.evolution.duhamel import Quadrature, duhamel_trilinear
from src.evolution.propagator import free_trajectory
from src.expansion.alpha import (
    RegularityParams,
    alpha,
    alpha_closed_form,
    alpha_sequence,
    predicted_sigma,
    s_infinity,
    step_count_for,
    threshold,
)
from src.expansion.towers import (
    ExpansionVariant,
    build_z_terms,
    build_zeta_terms,
    expansion_pieces,
    forcing_sum,
    ordered_triples,
)
from src.spectral.grid import TimeGrid
from src.spectral.products import trajectory_cubic
from src.utils.errors import ExpansionError

from .conftest import low_mode_field


@pytest.fixture
def z1(grid8):
    return free_trajectory(low_mode_field(grid8, radius=1, amplitude=0.3, seed=7), TimeGrid(0.05, 6))


class TestAlpha:
    """Exact smoothing exponents"""

    def test_first_values(self):
        assert alpha_sequence(4) == [Fraction(1), Fraction(2), Fraction(5, 2), Fraction(11, 4)]

    def test_closed_form_matches_recursion(self):
        for k in range(1, 65):
            assert alpha_closed_form(k) == alpha(k)

    def test_increases_to_three(self):
        values = alpha_sequence(40)
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(v < 3 for v in values)

    def test_thresholds(self):
        assert threshold(2) == Fraction(1, 4)
        assert threshold(3) == Fraction(1, 5)
        assert threshold(4) == Fraction(2, 11)
        assert threshold(30) > s_infinity()

    def test_rejects_zero_index(self):
        with pytest.raises(ValueError):
            alpha(0)

    @pytest.mark.parametrize(
        "s, k",
        [(0.3, 1), (0.49, 1), (Fraction(1, 4), 2), (0.22, 2), (Fraction(1, 5), 3), (0.19, 3), (0.18, 5)],
    )
    def test_step_count(self, s, k):
        assert step_count_for(s) == k

    @pytest.mark.parametrize("s", [Fraction(1, 6), 0.1, 0.5, 0.7])
    def test_step_count_out_of_range(self, s):
        with pytest.raises(ExpansionError):
            step_count_for(s)

    def test_predicted_sigma(self):
        prediction = predicted_sigma(2, 0.3)
        assert prediction.value == pytest.approx(0.6)
        assert prediction.in_range
        assert not predicted_sigma(3, 0.6).in_range

    def test_regularity_params(self):
        params = RegularityParams.auto(0.22)
        assert params.k == 2
        assert params.alpha == 2
        assert params.bracket_ok
        assert not RegularityParams(0.22, k=3).bracket_ok
        with pytest.raises(ValueError):
            RegularityParams(0.6)
        with pytest.raises(ValueError):
            RegularityParams(0.3, sigma=0.4)


class TestTriples:
    @pytest.mark.parametrize(
        "order, allowed, count",
        [(3, [1], 1), (5, [1, 3], 3), (7, [1, 3, 5], 6), (9, [1, 3, 5, 7], 10)],
    )
    def test_counts(self, order, allowed, count):
        assert len(ordered_triples(order, allowed)) == count

    def test_lexicographic(self):
        assert ordered_triples(5, [1, 3]) == [(1, 1, 3), (1, 3, 1), (3, 1, 1)]


class TestTowers:
    """Full and unbalanced towers"""

    def test_third_order_is_duhamel_of_cubic(self, z1):
        expansion = build_z_terms(z1, 2)
        direct = duhamel_trilinear(z1, z1, z1)
        np.testing.assert_allclose(expansion.term(3).data, direct.data, atol=1e-14)

    def test_towers_agree_through_fifth_order(self, z1):
        full = build_z_terms(z1, 3)
        unbalanced = build_zeta_terms(z1, 3)
        for order in (1, 3, 5):
            np.testing.assert_allclose(unbalanced.term(order).data, full.term(order).data, atol=1e-13)

    def test_seventh_order_gap_is_the_balanced_piece(self, z1):
        full = build_z_terms(z1, 4)
        unbalanced = build_zeta_terms(z1, 4)
        gap = full.term(7) - unbalanced.term(7)
        pieces = expansion_pieces(full, (1, 3, 3))
        np.testing.assert_allclose(gap.data, pieces.data, atol=1e-14)
        assert np.abs(pieces.data).max() > 0

    def test_multilinear_scaling(self, grid8):
        tg = TimeGrid(0.05, 6)
        phi = low_mode_field(grid8, radius=1, amplitude=0.3, seed=2)
        base = build_zeta_terms(free_trajectory(phi, tg), 3)
        scaled = build_zeta_terms(free_trajectory(phi * 2.0, tg), 3)
        np.testing.assert_allclose(scaled.term(3).data, 8.0 * base.term(3).data, atol=1e-12)
        np.testing.assert_allclose(scaled.term(5).data, 32.0 * base.term(5).data, atol=1e-12)

    def test_terms_vanish_at_zero(self, z1):
        expansion = build_zeta_terms(z1, 3)
        for order in (3, 5):
            assert np.all(expansion.term(order).data[0] == 0)

    def test_gauss_legendre_agrees_with_trapezoid(self, grid8):
        z = free_trajectory(low_mode_field(grid8, radius=1, amplitude=0.3), TimeGrid(0.05, 41))
        trap = build_zeta_terms(z, 2, Quadrature.TRAPEZOID).term(3).snapshot(-1)
        gauss = build_zeta_terms(z, 2, Quadrature.GAUSS_LEGENDRE).term(3).snapshot(-1)
        scale = np.abs(gauss.coefficients).max()
        assert np.abs(trap.coefficients - gauss.coefficients).max() <= 1e-3 * scale

    def test_set_metadata(self, z1):
        expansion = build_zeta_terms(z1, 3, metadata={"seed": 5})
        assert expansion.variant is ExpansionVariant.UNBALANCED_ZETA
        assert expansion.orders == [1, 3, 5]
        manifest = expansion.to_manifest()
        assert manifest["variant"] == "unbalanced-zeta"
        assert manifest["quadrature"] == "trapezoid"
        assert manifest["seed"] == 5

    def test_truncate_and_restrict(self, z1):
        expansion = build_zeta_terms(z1, 3)
        assert expansion.truncated(2).orders == [1, 3]
        assert expansion.restricted(0.02).time_grid.nodes == 3

    def test_total_sums_terms(self, z1):
        expansion = build_zeta_terms(z1, 2)
        np.testing.assert_allclose(expansion.total().data, z1.data + expansion.term(3).data)

    def test_forcing_sum_generates_terms(self, z1):
        expansion = build_zeta_terms(z1, 2)
        np.testing.assert_allclose(forcing_sum(expansion).data, trajectory_cubic(z1).data, atol=1e-14)
        assert np.all(forcing_sum(expansion, 1).data == 0)


class TestTowerErrors:
    def test_full_tower_depth_limit(self, z1):
        with pytest.raises(ExpansionError):
            build_z_terms(z1, 5)

    def test_zeta_depth_positive(self, z1):
        with pytest.raises(ExpansionError):
            build_zeta_terms(z1, 0)

    @pytest.mark.parametrize("order", [0, 2, 7])
    def test_unknown_order(self, z1, order):
        with pytest.raises(ExpansionError):
            build_zeta_terms(z1, 3).term(order)

    def test_bad_truncation(self, z1):
        with pytest.raises(ExpansionError):
            build_zeta_terms(z1, 2).truncated(3)

    def test_full_residual_forcing_limited(self, z1):
        with pytest.raises(ExpansionError):
            forcing_sum(build_z_terms(z1, 3))
