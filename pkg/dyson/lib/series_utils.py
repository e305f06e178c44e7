"""
Summation utilities for power-law series.

This module evaluates the slowly converging sums that appear in every energy of the
long-range chain without special-function libraries. It includes:
    - Euler-Maclaurin evaluation of power tails sum_{d >= start} d^(-s).
    - Tables of tails for all starting points up to a bound.
    - Generalized harmonic numbers H_n^(k), scalar and tabulated.
"""

import math

import numpy as np


# Minimum number of terms summed explicitly before the Euler-Maclaurin correction.
MIN_PREFIX_TERMS = 64


def prefix_length(exponent: float) -> int:
    """
    Number of terms summed directly before switching to the asymptotic correction.

    :param exponent: Decay exponent s > 1 of the series.
    :return: max(64, 10 / (s - 1)) rounded up.
    """

    return max(MIN_PREFIX_TERMS, math.ceil(10.0 / (exponent - 1.0)))


def euler_maclaurin_remainder(exponent: float, start: float) -> float:
    """
    Asymptotic value of sum_{d >= start} d^(-s) through the third-derivative term.

    :param exponent: Decay exponent s > 1.
    :param start: First index of the remainder (large enough for the expansion).
    :return: Integral plus endpoint and Bernoulli corrections.
    """

    s = exponent
    m = float(start)
    integral = m ** (1.0 - s) / (s - 1.0)
    half_endpoint = 0.5 * m ** (-s)
    first_derivative = s * m ** (-s - 1.0) / 12.0
    third_derivative = s * (s + 1.0) * (s + 2.0) * m ** (-s - 3.0) / 720.0
    return integral + half_endpoint + first_derivative - third_derivative


def power_tail(exponent: float, start: int) -> float:
    """
    Evaluate sum_{d=start}^inf d^(-s) to about 1e-12 absolute accuracy.

    A prefix of `prefix_length(s)` terms is summed directly and the rest is
    evaluated by the Euler-Maclaurin formula.

    :param exponent: Decay exponent s; must exceed 1 for convergence.
    :param start: First index, at least 1.
    :return: Value of the tail.
    :raises ValueError: If the series diverges or `start` < 1.
    """

    if not exponent > 1.0:
        raise ValueError(f"Power tail diverges for exponent {exponent} <= 1.")
    if start < 1:
        raise ValueError(f"Power tail start must be >= 1, got {start}.")
    stop = int(start) + prefix_length(exponent)
    head = np.arange(int(start), stop, dtype=np.float64) ** (-exponent)
    return math.fsum(head) + euler_maclaurin_remainder(exponent, stop)


def power_tail_table(exponent: float, max_start: int) -> np.ndarray:
    """
    Tabulate T[d] = sum_{k >= d} k^(-s) for d = 1..max_start.

    Entry 0 is NaN so that the table can be indexed by the starting point.

    :param exponent: Decay exponent s > 1.
    :param max_start: Largest starting point tabulated.
    :return: Array of length max_start + 1.
    """

    if max_start < 1:
        raise ValueError(f"max_start must be >= 1, got {max_start}.")
    table = np.empty(max_start + 1, dtype=np.float64)
    table[0] = np.nan
    table[max_start] = power_tail(exponent, max_start)
    if max_start > 1:
        terms = np.arange(1, max_start, dtype=np.float64) ** (-exponent)
        table[1:max_start] = table[max_start] + np.cumsum(terms[::-1])[::-1]
    return table


def harmonic(n: int, k: float) -> float:
    """
    Generalized harmonic number H_n^(k) = sum_{y=1}^n y^(-k), summed exactly.

    :param n: Number of terms, at least 1.
    :param k: Real exponent.
    :return: The partial sum.
    """

    if n < 1:
        raise ValueError(f"Harmonic number needs n >= 1, got {n}.")
    return math.fsum(np.arange(1, int(n) + 1, dtype=np.float64) ** (-k))


def harmonic_table(n_max: int, k: float) -> np.ndarray:
    """
    Tabulate H_n^(k) for n = 0..n_max with H_0 = 0.

    :param n_max: Largest n tabulated.
    :param k: Real exponent.
    :return: Array of length n_max + 1.
    """

    table = np.zeros(n_max + 1, dtype=np.float64)
    if n_max >= 1:
        table[1:] = np.cumsum(np.arange(1, n_max + 1, dtype=np.float64) ** (-k))
    return table
