"""
Unit tests for dyson.chain.rigor_bounds module.

This test suite covers:
    - Agreement of the direct, closed-form and tabulated W_alpha(L).
    - The increment Delta W_alpha(L) and its integral lower bound.
    - chi_alpha, zeta*_alpha, the thresholds and the certified zeta_alpha.
    - C_alpha and both readings of K_c(alpha).
    - Field contributions and the empirical field bound constant.
"""

import math
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from dyson.chain.constants import KcVariant
from dyson.chain.contour_geometry import Contour, Triangle
from dyson.chain.lattice_core import CouplingParams, FieldProfile, tail_sum
from dyson.chain.rigor_bounds import (
    alpha_bar,
    alpha_plus,
    alpha_star,
    alpha_zero_lower_bound,
    c_alpha,
    cfmp_lower_bound,
    chi,
    chi_table,
    delta_w,
    delta_w_lower_bound,
    field_bound_constant,
    field_contribution,
    k_c,
    large_l_limit,
    log_field_bound_violations,
    w_closed,
    w_direct,
    w_table,
    zeta_alpha,
    zeta_star,
)


ZETA_2 = math.pi**2 / 6.0
ALPHAS = [0.0, 0.1, 0.2, 0.27]


def single(first: int, last: int) -> Contour:
    return Contour((Triangle.from_sites(first, last),))


# --------------------------------------------------------------------------------------
# W_alpha
# --------------------------------------------------------------------------------------


class TestW:
    """
    Tests for w_direct, w_closed, w_table and delta_w.
    """

    def test_first_values(self) -> None:
        assert w_direct(1, 0.0) == pytest.approx(2.0 * (2.0 - ZETA_2), abs=1e-12)
        assert w_closed(1, 0.0) == pytest.approx(0.71013, abs=1e-5)
        assert w_direct(2, 0.0) == pytest.approx(1.8647, abs=1e-4)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_closed_form_matches_definition(self, alpha: float) -> None:
        for L in range(1, 201):
            assert abs(w_closed(L, alpha) - w_direct(L, alpha)) <= 1e-9

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_table_matches_closed_form(self, alpha: float) -> None:
        # Act.
        table = w_table(300, alpha)

        # Assert.
        assert np.isnan(table[0])
        for L in (1, 2, 3, 17, 150, 300):
            assert table[L] == pytest.approx(w_closed(L, alpha), abs=1e-9)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_increment(self, alpha: float) -> None:
        for L in (1, 2, 5, 40, 199):
            expected = w_closed(L + 1, alpha) - w_closed(L, alpha)
            assert delta_w(L, alpha) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.0, 0.1, 0.2, 0.25])
    def test_increment_positive(self, alpha: float) -> None:
        assert delta_w(1, alpha) >= w_direct(1, alpha) > 0.0
        assert all(delta_w(L, alpha) > 0.0 for L in range(1, 300))

    def test_increment_lower_bound(self) -> None:
        # Arrange.
        alpha = 0.2

        # Assert.
        for L in (3, 10, 100, 1000):
            bound = delta_w_lower_bound(L, alpha)
            assert 0.0 < bound <= delta_w(L, alpha)
        assert delta_w_lower_bound(10, 0.35) < 0.0
        with pytest.raises(ValueError, match="L >= 3"):
            delta_w_lower_bound(2, 0.1)

    def test_large_l_limit_approached(self) -> None:
        near, limit = large_l_limit(100, 0.5)
        far, same_limit = large_l_limit(100_000, 0.5)
        assert limit == same_limit == pytest.approx(6.0 - 4.0 * math.sqrt(2.0))
        assert abs(far - limit) < 0.01
        assert abs(far - limit) < abs(near - limit)
        with pytest.raises(ValueError):
            large_l_limit(10, 0.0)

    def test_alpha_zero_lower_bound(self) -> None:
        for L in range(1, 101):
            assert alpha_zero_lower_bound(L) <= w_closed(L, 0.0)

    @pytest.mark.parametrize("L", [0, -3, 2.5])
    def test_invalid_length(self, L) -> None:
        with pytest.raises(ValueError, match="positive integer"):
            w_direct(L, 0.1)

    def test_invalid_alpha(self) -> None:
        with pytest.raises(ValueError, match="alpha"):
            w_closed(3, 1.0)


# --------------------------------------------------------------------------------------
# chi, zeta and thresholds
# --------------------------------------------------------------------------------------


class TestThresholds:
    """
    Tests for chi, zeta_star and the alpha thresholds.
    """

    def test_chi(self) -> None:
        assert chi(1, 0.0) == 4.0
        assert chi(8, 0.5) == pytest.approx(2.8284271)
        with pytest.raises(ValueError, match="positive"):
            chi(0, 0.5)

    @pytest.mark.parametrize("alpha", [0.0, 0.3])
    def test_chi_table(self, alpha: float) -> None:
        table = chi_table(10, alpha)
        assert np.isnan(table[0])
        for L in range(1, 11):
            assert table[L] == pytest.approx(chi(L, alpha))

    def test_zeta_star(self) -> None:
        assert zeta_star(0.0) == 2.0
        assert zeta_star(0.2) == pytest.approx(1.7565, abs=1e-4)
        assert zeta_star(alpha_plus()) == pytest.approx(0.0, abs=1e-12)

    def test_alpha_star(self) -> None:
        value = alpha_star()
        assert 0.2713 < value < 0.2715
        assert tail_sum(CouplingParams(value), 1) == pytest.approx(2.0, abs=1e-10)
        assert value < alpha_bar()

    def test_alpha_bar_and_plus(self) -> None:
        assert alpha_bar() == pytest.approx(0.29044, abs=1e-4)
        assert alpha_plus() == pytest.approx(0.58496, abs=1e-4)
        assert alpha_star() < alpha_bar() < alpha_plus()


class TestZetaAlpha:
    """
    Tests for zeta_alpha certification.
    """

    @pytest.mark.parametrize("alpha", [0.0, 0.05, 0.1, 0.15, 0.2, 0.25])
    def test_certified(self, alpha: float) -> None:
        # Act.
        report = zeta_alpha(alpha, 10_000)

        # Assert.
        assert report.certified
        assert report.zeta_alpha > 0.0
        assert report.zeta_alpha <= report.zeta_star
        assert report.w_increasing
        assert report.checked_up_to == 10_000
        assert report.min_margin >= -1e-9

    def test_alpha_zero_value(self) -> None:
        report = zeta_alpha(0.0, 1000)
        assert report.zeta_star == 1.0
        assert report.zeta_alpha <= w_direct(1, 0.0) / 4.0 + 1e-12

    def test_bound_holds_on_table(self) -> None:
        # Arrange.
        alpha, limit = 0.1, 2000
        report = zeta_alpha(alpha, limit)

        # Act.
        weights = w_table(limit, alpha)[1:]
        lower = report.zeta_alpha * chi_table(limit, alpha)[1:]

        # Assert.
        assert np.all(weights - lower >= -1e-10)
        assert 1 <= report.threshold_L <= limit

    @pytest.mark.parametrize("alpha", [0.3, -0.01])
    def test_out_of_range(self, alpha: float) -> None:
        with pytest.raises(ValueError, match="alpha_star"):
            zeta_alpha(alpha)

    def test_to_dict(self) -> None:
        record = zeta_alpha(0.2, 100).to_dict()
        assert set(record) == {
            "alpha",
            "zeta_alpha",
            "L1_or_L2",
            "checked_up_to",
            "certified",
            "zeta_star",
            "w_increasing",
            "min_margin",
        }

    @patch("dyson.chain.rigor_bounds.LOGGER")
    def test_logs_certificate(self, mock_logger: MagicMock) -> None:
        zeta_alpha(0.1, 100)
        messages = [call.args[0] for call in mock_logger.info.call_args_list]
        assert any("certified" in message for message in messages)


# --------------------------------------------------------------------------------------
# Quasi-additivity constants
# --------------------------------------------------------------------------------------


class TestConstants:
    """
    Tests for c_alpha, cfmp_lower_bound and k_c.
    """

    def test_c_alpha(self) -> None:
        assert c_alpha(0.5) == pytest.approx((3.0 - 2.0**1.5) / 0.25)
        assert c_alpha(alpha_plus()) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(ValueError):
            c_alpha(0.0)

    def test_cfmp_lower_bound(self) -> None:
        expected = 0.5 * c_alpha(0.5) * (1.0 + math.sqrt(2.0))
        assert cfmp_lower_bound([1, 2], 0.5) == pytest.approx(expected)

    def test_k_c_corrected(self) -> None:
        # Act.
        value = k_c(0.3, 100.0)

        # Assert.
        expected = 1.0 - 0.3 * 100.0**-0.7 - math.pi**2 / 600.0
        assert value.value == pytest.approx(expected)
        assert value.value == pytest.approx(0.97161, abs=1e-5)
        assert value.capped == 0.5
        assert not value.in_range
        assert value.variant is KcVariant.CORRECTED

    def test_k_c_printed_is_negative(self) -> None:
        value = k_c(0.3, 100.0, KcVariant.PRINTED)
        assert value.value == pytest.approx(
            1.0 - 0.3 * 100.0**0.7 - math.pi**2 / 600.0
        )
        assert value.value < 0.0
        assert not value.in_range

    def test_k_c_in_range(self) -> None:
        value = k_c(0.5, 2.5, "corrected")
        assert 0.0 < value.value <= 0.5
        assert value.in_range
        assert value.capped == value.value

    def test_k_c_needs_c_above_one(self) -> None:
        with pytest.raises(ValueError, match="c > 1"):
            k_c(0.2, 1.0)


# --------------------------------------------------------------------------------------
# Decaying fields
# --------------------------------------------------------------------------------------


class TestField:
    """
    Tests for field_contribution, field_bound_constant and the logarithmic bound.
    """

    def test_inside_cutoff_is_zero(self) -> None:
        fp = FieldProfile(1.0, 1.0, 10)
        assert field_contribution(single(-9, 9), fp) == 0.0

    def test_harmonic_difference(self) -> None:
        # Arrange.
        L = 1000
        fp = FieldProfile(1.0, 1.0, L)

        # Act.
        value = field_contribution(single(L, 2 * L - 1), fp)

        # Assert.
        assert value == pytest.approx(math.log(2.0), abs=1e-3)
        doubled = FieldProfile(2.0, 1.0, L)
        assert field_contribution(single(L, 2 * L - 1), doubled) == pytest.approx(
            2.0 * value
        )

    def test_negative_field_uses_absolute_value(self) -> None:
        contour = single(3, 5)
        assert field_contribution(contour, FieldProfile(-1.0, 0.5)) == pytest.approx(
            field_contribution(contour, FieldProfile(1.0, 0.5))
        )

    @pytest.mark.parametrize("gamma", [0.8, 1.0])
    def test_bound_constant_bounds_samples(self, gamma: float) -> None:
        # Arrange.
        alpha, cutoff = 0.5, 16
        fp = FieldProfile(0.7, gamma, cutoff)
        samples = [single(cutoff, cutoff + m - 1) for m in range(1, 33)]
        samples.append(
            Contour((Triangle.from_sites(20, 20), Triangle.from_sites(24, 25)))
        )

        # Act.
        constant = field_bound_constant(samples, fp, alpha)

        # Assert.
        assert constant > 0.0
        factor = 0.7 / (1.0 - gamma) if gamma < 1.0 else 0.7
        decay = cutoff ** (-(gamma + alpha - 1.0))
        exponent = 1.0 - gamma
        for contour in samples:
            norm = sum(chi(t.mass, exponent) for t in contour.triangles)
            bound = constant * factor * decay * norm
            assert field_contribution(contour, fp) <= bound * (1.0 + 1e-12)

    def test_bound_constant_trivial_cases(self) -> None:
        fp = FieldProfile(1.0, 0.9, 4)
        assert field_bound_constant([], fp, 0.5) == 0.0
        assert field_bound_constant([single(5, 6)], FieldProfile(0.0), 0.5) == 0.0
        with pytest.raises(ValueError, match="gamma <= 1"):
            field_bound_constant([single(5, 6)], FieldProfile(1.0, 1.5), 0.5)

    @patch("dyson.chain.rigor_bounds.LOGGER")
    def test_log_bound_fails_for_unit_triangles(self, mock_logger: MagicMock) -> None:
        # Arrange.
        fp = FieldProfile(1.0, 1.0, 8)
        samples = [single(8, 8), single(8, 15), single(-3, 3)]

        # Act.
        violations = log_field_bound_violations(samples, fp)

        # Assert.
        assert [v.index for v in violations] == [0]
        assert violations[0].bound == 0.0
        mock_logger.warning.assert_called_once()
