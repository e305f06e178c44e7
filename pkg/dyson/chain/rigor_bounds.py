"""
This module provides the closed-form quantities behind the energy lower bounds of
the long-range chain. It includes:
    - W_alpha(L) by its defining double sum, by the harmonic closed form and as a
      vectorized table, together with the increment Delta W_alpha(L).
    - The contour-norm kernel chi_alpha, zeta*_alpha and the certified zeta_alpha.
    - The thresholds alpha*, alpha-bar and alpha+.
    - The constants C_alpha and K_c(alpha) of the quasi-additivity inequality.
    - The decaying-field contribution of a contour and its empirical bound constant.

All W evaluations use the pure power law J(d) = d^(-2+alpha), including J(1) = 1.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from dyson.chain.constants import DEFAULT_SEARCH_LIMIT, KcVariant
from dyson.lib.logging_utils import LOGGER
from dyson.lib.series_utils import (
    harmonic,
    harmonic_table,
    power_tail,
    power_tail_table,
)

if TYPE_CHECKING:
    from dyson.chain.contour_geometry import Contour
    from dyson.chain.lattice_core import FieldProfile


# Relative rounding allowance when certifying W_alpha(L) >= zeta_alpha chi_alpha(L).
MARGIN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """
    Certified lower bound W_alpha(L) >= zeta_alpha chi_alpha(L) for L <= checked_up_to.
    """

    alpha: float
    zeta_alpha: float
    threshold_L: int  # L1 for alpha > 0, L2 for alpha = 0.
    checked_up_to: int
    certified: bool
    zeta_star: float  # Cap of the minimum (1 for alpha = 0).
    w_increasing: bool  # Delta W_alpha(L) > 0 for every checked L.
    min_margin: float  # min_L W_alpha(L) - zeta_alpha chi_alpha(L).

    def to_dict(self) -> Dict[str, object]:
        return {
            "alpha": self.alpha,
            "zeta_alpha": self.zeta_alpha,
            "L1_or_L2": self.threshold_L,
            "checked_up_to": self.checked_up_to,
            "certified": self.certified,
            "zeta_star": self.zeta_star,
            "w_increasing": self.w_increasing,
            "min_margin": self.min_margin,
        }


@dataclass(frozen=True)
class KcValue:
    """
    K_c(alpha) as evaluated, the value used downstream and its range status.
    """

    value: float
    capped: float  # min(value, 1/2).
    in_range: bool  # 0 < value <= 1/2.
    variant: KcVariant


@dataclass(frozen=True)
class FieldBoundViolation:
    index: int  # Position of the contour in the sample list.
    contribution: float
    bound: float


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must satisfy 0 <= alpha < 1, got {alpha}.")


def _check_length(L: int) -> None:
    if int(L) != L or L < 1:
        raise ValueError(f"L must be a positive integer, got {L}.")


# --------------------------------------------------------------------------------------
# W_alpha
# --------------------------------------------------------------------------------------


def w_direct(L: int, alpha: float) -> float:
    """
    W_alpha(L) evaluated from its definition.

    For each site x of the block [1, L] the couplings to the near sites
    [L+1, 2L] and [-L+1, 0] count positively and the couplings to the far sites
    [2L+1, inf) and (-inf, -L] count negatively. The far parts are power tails.

    :param L: Block length, at least 1.
    :param alpha: Exponent in [0, 1).
    :return: W_alpha(L).
    """

    _check_length(L)
    _check_alpha(alpha)
    s = 2.0 - alpha
    couplings = np.zeros(2 * L + 1, dtype=np.float64)
    couplings[1:] = np.arange(1, 2 * L + 1, dtype=np.float64) ** (-s)
    tails = power_tail_table(s, 2 * L)

    terms = []
    for x in range(1, L + 1):
        near_right = couplings[L + 1 - x : 2 * L - x + 1].sum()
        near_left = couplings[x : x + L].sum()
        far = tails[2 * L + 1 - x] + tails[x + L]
        terms.append(near_right + near_left - far)
    return math.fsum(terms)


def w_closed(L: int, alpha: float) -> float:
    """
    W_alpha(L) through generalized harmonic numbers:
    6H_L^(1-a) - 4H_{2L-1}^(1-a) + 8L H_{2L-1}^(2-a) - 6L H_L^(2-a) - 2L zeta(2-a).

    :param L: Block length, at least 1.
    :param alpha: Exponent in [0, 1).
    :return: W_alpha(L).
    """

    _check_length(L)
    _check_alpha(alpha)
    s = 2.0 - alpha
    return math.fsum(
        [
            6.0 * harmonic(L, 1.0 - alpha),
            -4.0 * harmonic(2 * L - 1, 1.0 - alpha),
            8.0 * L * harmonic(2 * L - 1, s),
            -6.0 * L * harmonic(L, s),
            -2.0 * L * power_tail(s, 1),
        ]
    )


def w_table(L_max: int, alpha: float) -> np.ndarray:
    """
    W_alpha(L) for L = 1..L_max, indexed by L (entry 0 is NaN).

    The closed form subtracts quantities of order L; rewriting the zeta terms as
    tails gives 6H_L^(1-a) - 4H_{2L-1}^(1-a) - 8L T(2L) + 6L T(L+1), which keeps
    the relative error near machine precision for large L.

    :param L_max: Largest block length.
    :param alpha: Exponent in [0, 1).
    :return: Array of length L_max + 1.
    """

    _check_length(L_max)
    _check_alpha(alpha)
    s = 2.0 - alpha
    harmonics = harmonic_table(2 * L_max, 1.0 - alpha)
    tails = power_tail_table(s, 2 * L_max + 1)
    lengths = np.arange(1, L_max + 1)
    table = np.empty(L_max + 1, dtype=np.float64)
    table[0] = np.nan
    table[1:] = (
        6.0 * harmonics[lengths]
        - 4.0 * harmonics[2 * lengths - 1]
        - 8.0 * lengths * tails[2 * lengths]
        + 6.0 * lengths * tails[lengths + 1]
    )
    return table


def delta_w(L: int, alpha: float) -> float:
    """
    Delta W_alpha(L) = W_alpha(L+1) - W_alpha(L), from the simplified expression
    6/(2L)^s + 4/(2L+1)^s + 6 sum_{y=L+1}^{2L-1} y^(-s) - 2 sum_{y>=2L+1} y^(-s).

    :param L: Block length, at least 1.
    :param alpha: Exponent in [0, 1).
    :return: The increment.
    """

    _check_length(L)
    _check_alpha(alpha)
    s = 2.0 - alpha
    middle = np.arange(L + 1, 2 * L, dtype=np.float64) ** (-s)
    return math.fsum(
        [
            6.0 * (2.0 * L) ** (-s),
            4.0 * (2.0 * L + 1.0) ** (-s),
            6.0 * math.fsum(middle),
            -2.0 * power_tail(s, 2 * L + 1),
        ]
    )


def delta_w_lower_bound(L: int, alpha: float) -> float:
    """
    Integral lower bound 2/(1-a) [3 (4/3)^(a-1) - 2^(1+a)] L^(a-1) for L >= 3.

    It is positive exactly for alpha < alpha_bar().
    """

    if L < 3:
        raise ValueError(f"The integral bound holds for L >= 3, got {L}.")
    _check_alpha(alpha)
    bracket = 3.0 * (4.0 / 3.0) ** (alpha - 1.0) - 2.0 ** (1.0 + alpha)
    return 2.0 / (1.0 - alpha) * bracket * float(L) ** (alpha - 1.0)


def large_l_limit(L: int, alpha: float) -> Tuple[float, float]:
    """
    (3/L^a) H_L^(1-a) - (2/L^a) H_{2L-1}^(1-a) - 4/L and its limit (3 - 2^(1+a))/a.

    The expression approaches the limit like L^(-a), so the two agree only slowly.

    :param L: Block length.
    :param alpha: Exponent in (0, 1).
    :return: (value at L, limit).
    """

    _check_length(L)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"The large-L limit needs 0 < alpha < 1, got {alpha}.")
    scale = float(L) ** (-alpha)
    value = (
        3.0 * scale * harmonic(L, 1.0 - alpha)
        - 2.0 * scale * harmonic(2 * L - 1, 1.0 - alpha)
        - 4.0 / L
    )
    return value, (3.0 - 2.0 ** (1.0 + alpha)) / alpha


def alpha_zero_lower_bound(L: int) -> float:
    """
    Lower bound 2(3H_L - 2H_{2L-1} - 4/L + 1) for W_0(L).
    """

    _check_length(L)
    harmonics = 3.0 * harmonic(L, 1.0) - 2.0 * harmonic(2 * L - 1, 1.0)
    return 2.0 * (harmonics - 4.0 / L + 1.0)


# --------------------------------------------------------------------------------------
# chi, zeta and thresholds
# --------------------------------------------------------------------------------------


def chi(L: float, alpha: float) -> float:
    """
    Contour-norm kernel: L^alpha for alpha > 0 and log L + 4 for alpha = 0.

    :param L: Mass (positive; non-integers are accepted).
    :param alpha: Exponent in [0, 1).
    :return: chi_alpha(L).
    """

    if not L > 0:
        raise ValueError(f"chi needs a positive argument, got {L}.")
    if alpha == 0.0:
        return math.log(L) + 4.0
    return float(L) ** alpha


def chi_table(L_max: int, alpha: float) -> np.ndarray:
    """
    chi_alpha(L) for L = 1..L_max, indexed by L (entry 0 is NaN).
    """

    lengths = np.arange(0, L_max + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        values = np.log(lengths) + 4.0 if alpha == 0.0 else lengths**alpha
    values[0] = np.nan
    return values


def zeta_star(alpha: float) -> float:
    """
    zeta*_alpha = 2(3 - 2^(1+alpha))/(1 - alpha).
    """

    _check_alpha(alpha)
    return 2.0 * (3.0 - 2.0 ** (1.0 + alpha)) / (1.0 - alpha)


@lru_cache(maxsize=None)
def alpha_star() -> float:
    """
    Root of sum_{n >= 1} n^(-2+alpha) = 2, found by bisection on [0, 1/2].

    :return: alpha* (about 0.2714).
    """

    return float(
        bisect(
            lambda alpha: power_tail(2.0 - alpha, 1) - 2.0,
            0.0,
            0.5,
            xtol=1e-14,
            maxiter=200,
        )
    )


def alpha_bar() -> float:
    """
    log(8/9)/log(2/3): Delta W_alpha(L) > 0 for all L when alpha < alpha_bar.
    """

    return math.log(8.0 / 9.0) / math.log(2.0 / 3.0)


def alpha_plus() -> float:
    """
    log 3/log 2 - 1, where C_alpha and zeta*_alpha vanish.
    """

    return math.log(3.0) / math.log(2.0) - 1.0


def zeta_alpha(alpha: float, search_limit: int = DEFAULT_SEARCH_LIMIT) -> BoundReport:
    """
    Compute and certify zeta_alpha.

    zeta_alpha is the minimum of W_alpha(L)/chi_alpha(L) over L <= L1 and the cap
    (zeta*_alpha for alpha > 0, 1 for alpha = 0), where L1 is the last L below the
    search limit at which W_alpha(L) < cap * chi_alpha(L). The bound
    W_alpha(L) >= zeta_alpha chi_alpha(L) is then checked for every L up to the limit.

    :param alpha: Exponent in [0, alpha*).
    :param search_limit: Largest L checked.
    :return: The bound report.
    :raises ValueError: If alpha >= alpha*.
    """

    threshold = alpha_star()
    if not 0.0 <= alpha < threshold:
        raise ValueError(
            f"alpha >= alpha_star ({threshold:.6f}) or negative, got alpha = {alpha}."
        )
    _check_length(search_limit)
    LOGGER.info(
        f"📐 Certifying zeta_alpha for alpha = {alpha} up to L = {search_limit}."
    )

    w_values = w_table(search_limit + 1, alpha)
    weights = w_values[1 : search_limit + 1]
    kernels = chi_table(search_limit, alpha)[1:]
    ratios = weights / kernels
    cap = zeta_star(alpha) if alpha > 0.0 else 1.0

    below = np.flatnonzero(ratios < cap)
    threshold_L = int(below[-1]) + 1 if below.size else 1
    zeta = float(min(ratios[:threshold_L].min(), cap))
    margins = weights - zeta * kernels
    # zeta equals W/chi at its minimizer, so allow for rounding there.
    slack = MARGIN_TOLERANCE * np.maximum(np.abs(weights), 1.0)
    certified = bool(zeta > 0.0 and np.all(margins >= -slack))
    increasing = bool(np.all(np.diff(w_values[1:]) > 0.0))

    report = BoundReport(
        alpha=alpha,
        zeta_alpha=zeta,
        threshold_L=threshold_L,
        checked_up_to=search_limit,
        certified=certified,
        zeta_star=cap,
        w_increasing=increasing,
        min_margin=float(margins.min()),
    )
    if certified:
        LOGGER.info(
            f"✅ zeta_alpha = {zeta:.6g} (threshold L = {threshold_L}) certified "
            f"up to L = {search_limit}."
        )
    else:
        LOGGER.warning(
            f"⚠️ zeta_alpha = {zeta:.6g} not certified up to L = {search_limit} "
            f"(min margin {report.min_margin:.3g})."
        )
    return report


# --------------------------------------------------------------------------------------
# Quasi-additivity constants
# --------------------------------------------------------------------------------------


def c_alpha(alpha: float) -> float:
    """
    C_alpha = (3 - 2^(1+alpha))/(alpha(1-alpha)), for 0 < alpha < 1.
    """

    if not 0.0 < alpha < 1.0:
        raise ValueError(f"C_alpha needs 0 < alpha < 1, got {alpha}.")
    return (3.0 - 2.0 ** (1.0 + alpha)) / (alpha * (1.0 - alpha))


def cfmp_lower_bound(masses: Iterable[int], alpha: float) -> float:
    """
    (C_alpha/2) sum |T|^alpha over the given triangle masses.

    This energy bound holds when J(1) is large enough.
    """

    return 0.5 * c_alpha(alpha) * math.fsum(float(m) ** alpha for m in masses)


def k_c(alpha: float, c: float, variant: KcVariant = KcVariant.CORRECTED) -> KcValue:
    """
    Quasi-additivity constant K_c(alpha) = 1 - alpha c^e - pi^2/(6c).

    The printed variant uses e = 1 - alpha, the corrected one e = alpha - 1.

    :param alpha: Exponent in [0, 1).
    :param c: Grouping constant, greater than 1.
    :param variant: Exponent reading.
    :return: The value, min(value, 1/2) and whether 0 < value <= 1/2.
    """

    _check_alpha(alpha)
    if not c > 1.0:
        raise ValueError(f"K_c needs c > 1, got {c}.")
    variant = KcVariant(variant)
    exponent = 1.0 - alpha if variant is KcVariant.PRINTED else alpha - 1.0
    value = 1.0 - alpha * c**exponent - math.pi**2 / (6.0 * c)
    in_range = 0.0 < value <= 0.5
    if not in_range:
        LOGGER.debug(f"K_c = {value:.6g} ({variant.value}) is outside (0, 1/2].")
    return KcValue(
        value=value, capped=min(value, 0.5), in_range=in_range, variant=variant
    )


# --------------------------------------------------------------------------------------
# Decaying fields
# --------------------------------------------------------------------------------------


def field_contribution(gamma0: "Contour", fp: "FieldProfile") -> float:
    """
    sum over triangles T of sum over base sites x of |h_x|.

    :param gamma0: Contour.
    :param fp: Field profile (with its cutoff).
    :return: The field contribution.
    """

    total = 0.0
    for triangle in gamma0.triangles:
        sites = np.arange(triangle.first_site, triangle.last_site + 1)
        total += float(np.abs(fp.fields(sites)).sum())
    return total


def _field_norm(gamma0: "Contour", exponent: float) -> float:
    return math.fsum(chi(t.mass, exponent) for t in gamma0.triangles)


def field_bound_constant(
    samples: Sequence["Contour"], fp: "FieldProfile", alpha: float
) -> float:
    """
    Smallest C with field_contribution <= C |h*|/(1-gamma) L^(-p) ||Gamma||_(1-gamma)
    over the samples, where p = gamma + alpha - 1 and L is the field cutoff.

    For gamma = 1 the factor 1/(1-gamma) is dropped and the norm uses
    chi_0 = log |T| + 4.

    :param samples: Contours to maximize over.
    :param fp: Field profile; its cutoff is L (taken as 1 when 0).
    :param alpha: Coupling exponent.
    :return: The empirical constant, 0 for no samples or a zero field.
    :raises ValueError: If gamma > 1.
    """

    if fp.gamma > 1.0:
        raise ValueError(f"The field bound needs gamma <= 1, got {fp.gamma}.")
    if not samples or fp.h_star == 0.0:
        return 0.0
    factor = abs(fp.h_star)
    if fp.gamma < 1.0:
        factor /= 1.0 - fp.gamma
    norm_exponent = max(1.0 - fp.gamma, 0.0)
    cutoff = max(fp.cutoff_L, 1)
    decay = float(cutoff) ** (-(fp.gamma + alpha - 1.0))

    constant = 0.0
    for gamma0 in samples:
        norm = _field_norm(gamma0, norm_exponent)
        if norm <= 0.0:
            continue
        ratio = field_contribution(gamma0, fp) / (factor * decay * norm)
        constant = max(constant, ratio)
    return constant


def log_field_bound_violations(
    samples: Sequence["Contour"], fp: "FieldProfile"
) -> List[FieldBoundViolation]:
    """
    Contours whose field contribution exceeds 8|h*| sum log|T|.

    The bound is stated for alpha = 0 and gamma = 1; it fails for mass-1 triangles
    outside the cutoff, which are reported like any other violation.

    :param samples: Contours to check.
    :param fp: Field profile.
    :return: The violations found.
    """

    violations = []
    for index, gamma0 in enumerate(samples):
        contribution = field_contribution(gamma0, fp)
        bound = 8.0 * abs(fp.h_star) * math.fsum(
            math.log(t.mass) for t in gamma0.triangles
        )
        if contribution > bound + 1e-12:
            violations.append(FieldBoundViolation(index, contribution, bound))
    if violations:
        LOGGER.warning(
            f"⚠️ Logarithmic field bound fails for {len(violations)} of "
            f"{len(samples)} contours."
        )
    return violations
