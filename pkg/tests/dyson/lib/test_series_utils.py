"""
Unit tests for dyson.lib.series_utils module.

This test suite covers:
    - Power tails against closed-form zeta values.
    - Consistency of the tail table with the scalar evaluation.
    - Generalized harmonic numbers and their table.
    - Rejection of divergent or malformed inputs.
"""

import math

import numpy as np
import pytest

from dyson.lib.series_utils import (
    MIN_PREFIX_TERMS,
    harmonic,
    harmonic_table,
    power_tail,
    power_tail_table,
    prefix_length,
)


ZETA_3 = 1.2020569031595942


class TestPowerTail:
    """
    Tests for power_tail and prefix_length.
    """

    def test_zeta_two(self) -> None:
        assert power_tail(2.0, 1) == pytest.approx(math.pi**2 / 6, abs=1e-12)

    def test_zeta_three_from_later_start(self) -> None:
        # Arrange.
        expected = ZETA_3 - 1.0 - 1.0 / 8.0

        # Act.
        value = power_tail(3.0, 3)

        # Assert.
        assert value == pytest.approx(expected, abs=1e-12)

    def test_slow_decay_matches_shifted_tail(self) -> None:
        s = 1.2
        assert power_tail(s, 1) - power_tail(s, 2) == pytest.approx(1.0, abs=1e-10)

    def test_prefix_length(self) -> None:
        assert prefix_length(2.0) == MIN_PREFIX_TERMS
        assert prefix_length(1.0625) == 160

    @pytest.mark.parametrize("exponent", [1.0, 0.5, -1.0])
    def test_divergent_exponent_raises(self, exponent: float) -> None:
        with pytest.raises(ValueError, match="diverges"):
            power_tail(exponent, 1)

    def test_bad_start_raises(self) -> None:
        with pytest.raises(ValueError, match="start"):
            power_tail(2.0, 0)


class TestPowerTailTable:
    """
    Tests for power_tail_table.
    """

    def test_entries_match_scalar(self) -> None:
        # Arrange.
        exponent = 1.7

        # Act.
        table = power_tail_table(exponent, 50)

        # Assert.
        assert np.isnan(table[0])
        for start in (1, 2, 17, 50):
            assert table[start] == pytest.approx(
                power_tail(exponent, start), abs=1e-11
            )

    def test_consecutive_differences(self) -> None:
        table = power_tail_table(2.0, 10)
        differences = table[1:-1] - table[2:]
        expected = np.arange(1, 10, dtype=float) ** -2.0
        np.testing.assert_allclose(differences, expected, rtol=1e-9)

    def test_bad_size_raises(self) -> None:
        with pytest.raises(ValueError):
            power_tail_table(2.0, 0)


class TestHarmonic:
    """
    Tests for harmonic and harmonic_table.
    """

    def test_ordinary_harmonic(self) -> None:
        assert harmonic(3, 1.0) == pytest.approx(11.0 / 6.0)

    def test_negative_exponent_is_power_sum(self) -> None:
        assert harmonic(4, -1.0) == pytest.approx(10.0)

    def test_table(self) -> None:
        # Act.
        table = harmonic_table(4, 2.0)

        # Assert.
        assert table[0] == 0.0
        assert table[4] == pytest.approx(1 + 1 / 4 + 1 / 9 + 1 / 16)
        assert table[3] == pytest.approx(harmonic(3, 2.0))

    def test_empty_table(self) -> None:
        assert harmonic_table(0, 1.0).tolist() == [0.0]

    def test_bad_n_raises(self) -> None:
        with pytest.raises(ValueError, match="n >= 1"):
            harmonic(0, 1.0)
