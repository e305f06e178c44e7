"""
This module provides the empirical side of the Peierls argument for the long-range
chain. It includes:
    - Exhaustive enumeration of small contours whose base contains the origin.
    - Entropy checks comparing the weighted contour count with 2m e^(-b chi(m)).
    - Seeded random checks of the conditional energy lower bounds.
    - The Peierls series with a certified truncation error.
    - Upper bounds on the critical inverse temperature with and without a field.
"""

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache, partial
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaincc, gammaln

from dyson.chain.constants import (
    ALPHA_PRIME_GRID,
    DEFAULT_CENSUS_C,
    DEFAULT_GROUPING_C,
    FIELD_SAMPLE_CENSUS_MASS,
    FIELD_SAMPLE_MAX_MASS,
    MAX_CENSUS_HORIZON,
    MAX_CENSUS_MASS,
    MAX_SERIES_TERMS,
    SERIES_TOLERANCE,
    Boundary,
    KcVariant,
)
from dyson.chain.contour_geometry import (
    Contour,
    Triangle,
    build_triangles,
    conditional_energy,
    contour_energy,
    contour_norm,
    group_contours,
    pair_flip_points,
    spin_flip_points,
    triangles_to_spins,
)
from dyson.chain.lattice_core import CouplingParams, FieldProfile, SpinConfiguration
from dyson.chain.rigor_bounds import (
    alpha_star,
    chi,
    field_bound_constant,
    k_c,
    w_table,
    zeta_alpha,
)
from dyson.lib.logging_utils import LOGGER
from dyson.lib.task_utils import run_batched, spawn_seeds


# Largest inverse temperature tried when bracketing a Peierls threshold.
MAX_BETA = 2.0**200

# Largest field cutoff tried when searching for a positive Peierls coefficient.
MAX_FIELD_CUTOFF = 2**40

# Tolerance on |gamma - (1 - alpha)| for the critical decay.
CRITICAL_GAMMA_TOLERANCE = 1e-12

# Margin below which a sampled bound counts as violated.
VIOLATION_TOLERANCE = 1e-9


# --------------------------------------------------------------------------------------
# Enumeration
# --------------------------------------------------------------------------------------


def census_horizon(m: int, c: float) -> int:
    """
    Smallest horizon c m^4 + 2m that encloses every contour of mass m through 0.
    """

    return math.ceil(c * m**4 + 2 * m)


def merge_range(m: int, c: float) -> float:
    """
    Largest gap between the parts of one contour of mass m: c floor(m/2)^3.

    Two groups of total mass at most m merge by distance only when their gap is at
    most c times the cube of the smaller mass, which is at most floor(m/2).
    """

    return c * (m // 2) ** 3


def _round_trips(triangles: Sequence[Triangle]) -> bool:
    radius = max(max(abs(t.first_site), abs(t.last_site)) for t in triangles)
    sigma = triangles_to_spins(triangles, radius, Boundary.PLUS)
    rebuilt = sorted(pair_flip_points(spin_flip_points(sigma)))
    return rebuilt == sorted(triangles)


def _extend(
    chosen: List[Triangle],
    remaining: int,
    max_right: float,
    c: float,
    gap: float,
    found: Set[Contour],
) -> None:
    if remaining == 0:
        if not any(t.contains_site(0) for t in chosen):
            return
        if not _round_trips(chosen):
            return
        if len(group_contours(chosen, c)) == 1:
            found.add(Contour(tuple(chosen)))
        return

    covers_origin = any(t.contains_site(0) for t in chosen)
    last_left = chosen[-1].left
    left = last_left + 1.0
    while left <= max_right + 1.0 + gap:
        if left > 0 and not covers_origin:
            return
        for mass in range(1, remaining + 1):
            candidate = Triangle(left, left + mass)
            if _compatible_with_all(candidate, chosen):
                chosen.append(candidate)
                _extend(
                    chosen,
                    remaining - mass,
                    max(max_right, candidate.right),
                    c,
                    gap,
                    found,
                )
                chosen.pop()
        left += 1.0


def _compatible_with_all(candidate: Triangle, chosen: Sequence[Triangle]) -> bool:
    """
    New triangles start to the right of every chosen one: each chosen triangle
    must lie entirely to the left or strictly contain the candidate.
    """

    for triangle in chosen:
        if not (triangle.right < candidate.left or candidate.right < triangle.right):
            return False
        if triangle.distance_to(candidate) < min(triangle.mass, candidate.mass):
            return False
    return True


def _enumerate_slice(first: Triangle, m: int, c: float) -> List[Contour]:
    found: Set[Contour] = set()
    _extend([first], m - first.mass, first.right, c, merge_range(m, c), found)
    return sorted(found, key=lambda g: g.triangles)


def enumerate_contours(
    m: int,
    c: float = DEFAULT_CENSUS_C,
    horizon: Optional[int] = None,
    n_jobs: int = 1,
) -> List[Contour]:
    """
    All distinct contours of mass m whose base contains the origin.

    Triangle families are built left to right with pairwise compatibility pruning.
    A family is kept when it round-trips through spins unchanged and groups into a
    single contour with constant c. The first triangle fixes a slice of the search
    space; slices run in parallel.

    :param m: Contour mass, 1 <= m <= 4.
    :param c: Grouping constant.
    :param horizon: Sites on each side of the origin; at least c m^4 + 2m.
    :param n_jobs: Maximum number of parallel workers.
    :return: Contours sorted by their triangles.
    :raises ValueError: If m or the horizon is outside the guards.
    """

    if not 1 <= m <= MAX_CENSUS_MASS:
        raise ValueError(
            f"Contour census refused: mass m = {m} must be in [1, {MAX_CENSUS_MASS}]."
        )
    if not c > 1.0:
        raise ValueError(f"Grouping constant c must exceed 1, got {c}.")
    required = census_horizon(m, c)
    horizon = required if horizon is None else horizon
    if horizon < required:
        raise ValueError(
            f"Horizon {horizon} cannot enclose contours of mass {m}; need at least "
            f"c m^4 + 2m = {required}."
        )
    if horizon > MAX_CENSUS_HORIZON:
        raise ValueError(
            f"Contour census refused: horizon {horizon} exceeds {MAX_CENSUS_HORIZON}."
        )

    gap = merge_range(m, c)
    span = m + (m - 1) * gap
    first_left = max(-math.floor(span), -horizon) - 0.5
    slices = [
        Triangle(left, left + mass)
        for left in np.arange(first_left, 0.0, 1.0)
        for mass in range(1, m + 1)
    ]
    LOGGER.info(
        f"🔍 Enumerating contours of mass {m} (c = {c}) over {len(slices)} slices."
    )
    results = run_batched(
        partial(_enumerate_slice, m=m, c=c), slices, n_jobs=n_jobs, min_items_in_batch=8
    )
    contours = sorted({g for part in results for g in part}, key=lambda g: g.triangles)
    LOGGER.info(f"✅ Found {len(contours)} contours of mass {m}.")
    return contours


# --------------------------------------------------------------------------------------
# Entropy and energy checks
# --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class EntropyCheck:
    m: int
    c: float
    b: float
    alpha: float
    lhs: float
    rhs: float
    passed: bool
    contour_count: int

    def to_dict(self) -> Dict[str, object]:
        record = asdict(self)
        record["pass"] = record.pop("passed")
        return record


def entropy_check(
    m: int,
    c: float = DEFAULT_CENSUS_C,
    b: float = 5.0,
    alpha: float = 0.0,
    n_jobs: int = 1,
) -> EntropyCheck:
    """
    Compare sum over contours of e^(-b ||Gamma||_alpha) with 2m e^(-b chi_alpha(m)).

    :param m: Contour mass.
    :param c: Grouping constant of the enumeration.
    :param b: Positive weight.
    :param alpha: Norm exponent; 0 selects the logarithmic kernel.
    :param n_jobs: Maximum number of parallel enumeration workers.
    :return: Both sides and the verdict.
    """

    if not b > 0:
        raise ValueError(f"b must be positive, got {b}.")
    contours = enumerate_contours(m, c, n_jobs=n_jobs)
    lhs = math.fsum(math.exp(-b * contour_norm(g, alpha)) for g in contours)
    rhs = 2.0 * m * math.exp(-b * chi(m, alpha))
    check = EntropyCheck(m, c, b, alpha, lhs, rhs, lhs <= rhs, len(contours))
    if check.passed:
        LOGGER.info(f"✅ Entropy bound holds for m = {m}: {lhs:.6g} <= {rhs:.6g}.")
    else:
        LOGGER.warning(
            f"⚠️ Entropy bound fails for m = {m}: {lhs:.6g} > {rhs:.6g}."
        )
    return check


@dataclass(frozen=True)
class SampledViolation:
    """
    One contour of one random sample where a lower bound failed.
    """

    sample: int
    contour: Contour
    lhs: float
    rhs: float


@dataclass
class QuasiAdditivityReport:
    samples: int
    c: float
    alpha: float
    alpha_prime: float
    seed: int
    zeta_alpha_prime: float
    contours_checked: int = 0
    worst_margin: float = math.inf  # min over contours of lhs - rhs.
    min_ratio: float = math.inf  # min of H(Gamma | rest) / H(Gamma).
    violations: List[SampledViolation] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "samples": self.samples,
            "c": self.c,
            "alpha": self.alpha,
            "alpha_prime": self.alpha_prime,
            "seed": self.seed,
            "zeta_alpha_prime": self.zeta_alpha_prime,
            "contours_checked": self.contours_checked,
            "worst_margin": self.worst_margin,
            "min_ratio": self.min_ratio,
            "violations": len(self.violations),
        }


def random_configuration(
    rng: np.random.Generator, window_radius: int
) -> SpinConfiguration:
    """
    Plus-boundary configuration with i.i.d. minus spins at a random density in
    [0, 1/4).
    """

    density = rng.uniform(0.0, 0.25)
    spins = np.where(rng.random(2 * window_radius + 1) < density, -1, 1)
    return SpinConfiguration.from_array(spins, Boundary.PLUS)


def _quasi_additivity_sample(
    seed: int,
    c: float,
    cp: CouplingParams,
    alpha_prime: float,
    zeta: float,
    radius: int,
) -> List[Tuple[Contour, float, float, float]]:
    sigma = random_configuration(np.random.default_rng(seed), radius)
    cfg = group_contours(build_triangles(sigma), c)
    rows = []
    for gamma0 in cfg.contours:
        lhs = conditional_energy(gamma0, cfg, cp)
        rhs = 0.5 * zeta * contour_norm(gamma0, alpha_prime)
        rows.append((gamma0, lhs, rhs, contour_energy(gamma0, cp)))
    return rows


@lru_cache(maxsize=None)
def _zeta(alpha: float) -> float:
    return zeta_alpha(alpha).zeta_alpha


def _check_alpha_prime(alpha: float, alpha_prime: float) -> None:
    if not 0.0 <= alpha_prime <= alpha:
        raise ValueError(f"Need 0 <= alpha' <= alpha, got {alpha_prime}, {alpha}.")
    if not alpha_prime < alpha_star():
        raise ValueError(
            f"alpha' = {alpha_prime} must be below alpha_star = {alpha_star():.6f}."
        )


def quasi_additivity_check(
    samples: int,
    c: float = DEFAULT_GROUPING_C,
    alpha: float = 0.5,
    alpha_prime: float = 0.2,
    seed: int = 0,
    window_radius: int = 64,
    n_jobs: int = 1,
) -> QuasiAdditivityReport:
    """
    Check H(Gamma | rest) >= (zeta_alpha'/2) ||Gamma||_alpha' on random configurations.

    :param samples: Number of random configurations.
    :param c: Grouping constant.
    :param alpha: Coupling exponent.
    :param alpha_prime: Norm exponent, alpha' <= alpha and alpha' < alpha*.
    :param seed: Master seed; sample k uses the k-th spawned child seed.
    :param window_radius: N of the sampled windows.
    :param n_jobs: Maximum number of parallel workers.
    :return: The report with every violation found.
    """

    _check_alpha_prime(alpha, alpha_prime)
    cp = CouplingParams(alpha)
    zeta = _zeta(alpha_prime)
    report = QuasiAdditivityReport(samples, c, alpha, alpha_prime, seed, zeta)
    LOGGER.info(
        f"🔍 Checking quasi-additivity on {samples} samples (alpha = {alpha}, "
        f"alpha' = {alpha_prime}, c = {c}, seed = {seed})."
    )
    task = partial(
        _quasi_additivity_sample,
        c=c,
        cp=cp,
        alpha_prime=alpha_prime,
        zeta=zeta,
        radius=window_radius,
    )
    results = run_batched(task, spawn_seeds(seed, samples), n_jobs=n_jobs)
    for sample, rows in enumerate(results):
        for gamma0, lhs, rhs, energy in rows:
            report.contours_checked += 1
            report.worst_margin = min(report.worst_margin, lhs - rhs)
            if energy > 0:
                report.min_ratio = min(report.min_ratio, lhs / energy)
            if lhs < rhs - VIOLATION_TOLERANCE:
                report.violations.append(SampledViolation(sample, gamma0, lhs, rhs))

    if report.violations:
        LOGGER.warning(
            f"⚠️ {len(report.violations)} quasi-additivity violations in "
            f"{report.contours_checked} contours (worst margin "
            f"{report.worst_margin:.3g})."
        )
    else:
        LOGGER.info(
            f"✅ No violations in {report.contours_checked} contours; smallest ratio "
            f"H(G|rest)/H(G) = {report.min_ratio:.4g}."
        )
    return report


@dataclass
class TriangleBoundReport:
    samples: int
    c: float
    alpha: float
    seed: int
    contours_checked: int = 0
    conditional_violations: List[SampledViolation] = field(default_factory=list)
    energy_violations: List[SampledViolation] = field(default_factory=list)


def _triangle_bound_sample(
    seed: int, c: float, cp: CouplingParams, weights: np.ndarray, radius: int
) -> List[Tuple[Contour, float, float, float]]:
    sigma = random_configuration(np.random.default_rng(seed), radius)
    cfg = group_contours(build_triangles(sigma), c)
    rows = []
    for gamma0 in cfg.contours:
        total = math.fsum(weights[t.mass] for t in gamma0.triangles)
        conditional = conditional_energy(gamma0, cfg, cp)
        rows.append((gamma0, conditional, contour_energy(gamma0, cp), total))
    return rows


def triangle_energy_bound_check(
    samples: int,
    c: float = DEFAULT_GROUPING_C,
    alpha: float = 0.2,
    seed: int = 0,
    window_radius: int = 64,
    n_jobs: int = 1,
) -> TriangleBoundReport:
    """
    Check H(Gamma | rest) >= 1/2 sum W_alpha(|T|) and H(Gamma) >= sum W_alpha(|T|).

    :param samples: Number of random configurations.
    :param c: Grouping constant.
    :param alpha: Coupling exponent below alpha*.
    :param seed: Master seed.
    :param window_radius: N of the sampled windows.
    :param n_jobs: Maximum number of parallel workers.
    :return: The violations of both bounds.
    """

    if not 0.0 <= alpha < alpha_star():
        raise ValueError(f"alpha >= alpha_star or negative, got alpha = {alpha}.")
    weights = w_table(2 * window_radius + 1, alpha)
    task = partial(
        _triangle_bound_sample,
        c=c,
        cp=CouplingParams(alpha),
        weights=weights,
        radius=window_radius,
    )
    report = TriangleBoundReport(samples, c, alpha, seed)
    results = run_batched(task, spawn_seeds(seed, samples), n_jobs=n_jobs)
    for sample, rows in enumerate(results):
        for gamma0, conditional, energy, total in rows:
            report.contours_checked += 1
            if conditional < 0.5 * total - VIOLATION_TOLERANCE:
                report.conditional_violations.append(
                    SampledViolation(sample, gamma0, conditional, 0.5 * total)
                )
            if energy < total - VIOLATION_TOLERANCE:
                report.energy_violations.append(
                    SampledViolation(sample, gamma0, energy, total)
                )
    failures = len(report.conditional_violations) + len(report.energy_violations)
    if failures:
        LOGGER.warning(f"⚠️ Triangle energy bounds fail {failures} times.")
    return report


# --------------------------------------------------------------------------------------
# Peierls series
# --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesEvaluation:
    """
    Upper bound partial_sum + tail_bound of 2 sum_m m e^(-b chi_a(m)).
    """

    value: float
    partial_sum: float
    tail_bound: float
    terms: int
    converged: bool  # tail_bound < SERIES_TOLERANCE.


def _tail_bound(b: float, alpha_prime: float, terms: int) -> float:
    """
    Bound on 2 sum_{m > terms} m e^(-b chi(m)) by the integral from `terms`, valid
    where the summand decreases; inf elsewhere.
    """

    if alpha_prime == 0.0:
        if b <= 2.0:
            return math.inf
        return 2.0 * math.exp(-4.0 * b) * terms ** (2.0 - b) / (b - 2.0)
    a = alpha_prime
    if terms**a < 1.0 / (a * b):
        return math.inf
    shape = 2.0 / a
    survival = gammaincc(shape, b * terms**a)
    if survival <= 0.0:
        return 0.0
    log_tail = (
        math.log(2.0 / a) - shape * math.log(b) + gammaln(shape) + math.log(survival)
    )
    return math.exp(log_tail) if log_tail < 700.0 else math.inf


def evaluate_peierls_series(
    b: float, alpha_prime: float, max_terms: int = MAX_SERIES_TERMS
) -> SeriesEvaluation:
    """
    Evaluate 2 sum_{m >= 1} m e^(-b chi_alpha'(m)) with a certified tail.

    The number of explicit terms doubles from 64 until the tail bound drops below
    SERIES_TOLERANCE or `max_terms` is reached. The returned value is the partial
    sum plus the tail bound, an upper bound on the series.

    :param b: Coefficient beta K_c zeta_alpha'.
    :param alpha_prime: Norm exponent; 0 selects chi_0 = log m + 4.
    :param max_terms: Largest number of explicit terms.
    :return: The evaluation; value is inf when the tail cannot be bounded.
    """

    if b <= 0.0:
        return SeriesEvaluation(math.inf, math.inf, math.inf, 0, False)
    terms = min(64, max_terms)
    while True:
        tail = _tail_bound(b, alpha_prime, terms)
        if math.isfinite(tail) or terms >= max_terms:
            break
        terms = min(2 * terms, max_terms)
    if not math.isfinite(tail):
        return SeriesEvaluation(math.inf, math.inf, tail, terms, False)

    while tail >= SERIES_TOLERANCE and terms < max_terms:
        terms = min(2 * terms, max_terms)
        tail = _tail_bound(b, alpha_prime, terms)

    masses = np.arange(1, terms + 1, dtype=np.float64)
    if alpha_prime == 0.0:
        exponents = np.log(masses) - b * (np.log(masses) + 4.0)
    else:
        exponents = np.log(masses) - b * masses**alpha_prime
    partial_sum = 2.0 * float(np.exp(exponents).sum())
    return SeriesEvaluation(
        value=partial_sum + tail,
        partial_sum=partial_sum,
        tail_bound=tail,
        terms=terms,
        converged=tail < SERIES_TOLERANCE,
    )


def _peierls_coefficient(alpha: float, c: float, kc_variant: KcVariant) -> float:
    kc = k_c(alpha, c, kc_variant)
    if kc.value <= 0.0:
        raise ValueError(
            f"K_c({alpha}) = {kc.value:.6g} <= 0 with the {kc.variant.value} variant "
            f"at c = {c}; the Peierls bound needs K_c > 0."
        )
    return kc.capped


def peierls_series(
    beta: float,
    alpha: float,
    alpha_prime: float,
    c: float = DEFAULT_GROUPING_C,
    kc_variant: KcVariant = KcVariant.CORRECTED,
    terms: Optional[int] = None,
) -> float:
    """
    Upper bound 2 sum_m m e^(-beta K_c zeta_alpha' chi_alpha'(m)) on mu+(sigma_0 = -1).

    :param beta: Inverse temperature; 0 gives inf.
    :param alpha: Coupling exponent.
    :param alpha_prime: Norm exponent, alpha' <= alpha and alpha' < alpha*.
    :param c: Grouping constant.
    :param kc_variant: Reading of K_c; the value is capped at 1/2.
    :param terms: Optional cap on the number of explicit terms.
    :return: The series value (with certified tail), inf if it cannot be bounded.
    """

    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}.")
    _check_alpha_prime(alpha, alpha_prime)
    kc = _peierls_coefficient(alpha, c, KcVariant(kc_variant))
    b = beta * (kc * _zeta(alpha_prime))
    evaluation = evaluate_peierls_series(b, alpha_prime, terms or MAX_SERIES_TERMS)
    if beta == 0:
        LOGGER.warning("⚠️ Peierls series diverges at beta = 0.")
    return evaluation.value


def beta_threshold(kappa: float, alpha_prime: float) -> float:
    """
    Smallest beta with 2 sum_m m e^(-beta kappa chi_alpha'(m)) < 1/2.

    :param kappa: Positive Peierls coefficient.
    :param alpha_prime: Norm exponent.
    :return: The threshold, to relative precision about 1e-12.
    """

    if not kappa > 0:
        raise ValueError(f"The Peierls coefficient must be positive, got {kappa}.")

    def excess(beta: float) -> float:
        value = evaluate_peierls_series(beta * kappa, alpha_prime).value
        return min(value, 1e300) - 0.5

    high = 1.0
    while excess(high) >= 0.0:
        high *= 2.0
        if high > MAX_BETA:
            raise ValueError("No beta below 2^200 makes the Peierls series < 1/2.")
    low = 0.0 if high == 1.0 else high / 2.0
    beta = float(bisect(excess, low, high, xtol=1e-12 * high, maxiter=400))
    while excess(beta) >= 0.0:
        beta *= 1.0 + 1e-12
    return beta


# --------------------------------------------------------------------------------------
# Critical temperature bounds
# --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaCBound:
    alpha: float
    gamma: float
    h_star: float
    c: float
    kc_variant: KcVariant
    alpha_prime: float  # Norm exponent achieving the bound.
    beta_c: float  # inf when the field exceeds the critical threshold.
    L_required: int  # Field cutoff; 0 without a field.
    h_threshold: Optional[float]  # Largest |h*| on the critical decay.
    field_constant: Optional[float]  # Empirical C at L_required.
    regime: str  # "zero-field", "field" or "critical".

    def to_dict(self) -> Dict[str, object]:
        record = asdict(self)
        record["kc_variant"] = self.kc_variant.value
        return record


def _field_samples(cutoff: int, c: float) -> List[Contour]:
    """
    Single triangles of mass 1..64 and enumerated small contours, each shifted so
    that its first base site sits at the cutoff.
    """

    shapes = [
        Contour((Triangle.from_sites(0, mass - 1),))
        for mass in range(1, FIELD_SAMPLE_MAX_MASS + 1)
    ]
    for m in range(2, FIELD_SAMPLE_CENSUS_MASS + 1):
        shapes.extend(_census_shapes(m, c))
    samples = []
    for shape in shapes:
        first = min(t.first_site for t in shape.triangles)
        samples.append(shape.shifted(cutoff - first))
    return samples


@lru_cache(maxsize=None)
def _census_shapes(m: int, c: float) -> Tuple[Contour, ...]:
    return tuple(enumerate_contours(m, c))


def _zero_field_candidates(alpha: float) -> List[float]:
    threshold = alpha_star()
    return sorted(
        {0.0} | {a for a in ALPHA_PRIME_GRID if a <= alpha and a < threshold}
    )


def _zero_field_bound(
    alpha: float, gamma: float, c: float, kc_variant: KcVariant, n_jobs: int
) -> BetaCBound:
    kc = _peierls_coefficient(alpha, c, kc_variant)
    candidates = _zero_field_candidates(alpha)
    thresholds = run_batched(
        partial(_candidate_threshold, kc=kc), candidates, n_jobs=n_jobs
    )
    best = int(np.argmin(thresholds))
    return BetaCBound(
        alpha=alpha,
        gamma=gamma,
        h_star=0.0,
        c=c,
        kc_variant=kc_variant,
        alpha_prime=candidates[best],
        beta_c=thresholds[best],
        L_required=0,
        h_threshold=None,
        field_constant=None,
        regime="zero-field",
    )


def _candidate_threshold(alpha_prime: float, kc: float) -> float:
    return beta_threshold(kc * _zeta(alpha_prime), alpha_prime)


def _field_alpha_prime(alpha: float, gamma: float) -> float:
    upper = min(alpha, alpha_star())
    inside = [a for a in ALPHA_PRIME_GRID if 1.0 - gamma < a < upper]
    return min(inside) if inside else 0.5 * (1.0 - gamma + upper)


def _field_excess(
    cutoff: int, h_star: float, gamma: float, alpha: float, c: float
) -> Tuple[float, float]:
    """
    Empirical C at the cutoff and the matching field term C|h*|L^(-p)/(1-gamma).
    """

    profile = FieldProfile(h_star, gamma, cutoff)
    constant = field_bound_constant(_field_samples(cutoff, c), profile, alpha)
    factor = abs(h_star) / (1.0 - gamma)
    return constant, constant * factor * float(cutoff) ** (-(gamma + alpha - 1.0))


def _check_decay_hypothesis(alpha: float, gamma: float, threshold: float) -> None:
    if gamma <= 1.0 - alpha:
        raise ValueError(f"gamma <= 1-alpha: {gamma} <= {1.0 - alpha:.6g}.")
    if gamma <= 1.0 - threshold:
        raise ValueError(f"gamma <= 1-alpha_star: {gamma} <= {1.0 - threshold:.6g}.")


def beta_c_bound(
    alpha: float,
    gamma: Optional[float] = None,
    h_star: float = 0.0,
    c: float = DEFAULT_GROUPING_C,
    kc_variant: KcVariant = KcVariant.CORRECTED,
    n_jobs: int = 1,
) -> BetaCBound:
    """
    Upper bound on the critical inverse temperature.

    Without a field the bound is the smallest beta whose Peierls series is below
    1/2, minimized over alpha'. With a field decaying faster than
    max(1 - alpha, 1 - alpha*) the field is switched off inside a cutoff L chosen
    as small as possible while K_c zeta_alpha' - C|h*|L^(-p)/(1-gamma) stays
    positive. On the critical decay gamma = 1 - alpha the largest admissible |h*|
    is returned as well. At alpha = 0 a field with gamma >= 1 is dominated by the
    gamma = 1 field and handled like the critical decay, with the logarithmic norm.

    The decay hypothesis is checked whenever gamma is given, even with h* = 0.

    :param alpha: Coupling exponent.
    :param gamma: Field decay exponent; None means 1 and skips the check at h* = 0.
    :param h_star: Field amplitude; 0 selects the zero-field bound.
    :param c: Grouping constant.
    :param kc_variant: Reading of K_c.
    :param n_jobs: Maximum number of parallel workers for the alpha' grid.
    :return: The bound record.
    :raises ValueError: If gamma violates the decay hypothesis.
    """

    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must satisfy 0 <= alpha < 1, got {alpha}.")
    kc_variant = KcVariant(kc_variant)
    decay_given = gamma is not None or h_star != 0.0
    gamma = 1.0 if gamma is None else float(gamma)
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}.")

    threshold = alpha_star()
    lower = max(1.0 - alpha, 1.0 - threshold)
    critical = abs(gamma - (1.0 - alpha)) < CRITICAL_GAMMA_TOLERANCE
    critical = critical and alpha < threshold
    # At alpha = 0 the window (max(1-alpha, 1-alpha*), 1) for gamma is empty.
    logarithmic = gamma >= 1.0 and lower >= 1.0
    if decay_given and not (critical or logarithmic):
        _check_decay_hypothesis(alpha, gamma, threshold)

    LOGGER.info(
        f"🌡️ Bounding beta_c for alpha = {alpha}, gamma = {gamma}, h* = {h_star}, "
        f"c = {c} ({kc_variant.value} K_c)."
    )
    if h_star == 0.0:
        return _zero_field_bound(alpha, gamma, c, kc_variant, n_jobs)
    if critical or logarithmic:
        return _critical_bound(alpha, gamma, h_star, c, kc_variant)

    effective_gamma = gamma if gamma < 1.0 else 0.5 * (lower + 1.0)
    alpha_prime = _field_alpha_prime(alpha, effective_gamma)
    coefficient = _peierls_coefficient(alpha, c, kc_variant) * _zeta(alpha_prime)

    def kappa(cutoff: int) -> float:
        return coefficient - _field_excess(cutoff, h_star, effective_gamma, alpha, c)[1]

    good = 1
    if kappa(good) <= 0.0:
        bad = good
        good = 2
        while kappa(good) <= 0.0:
            bad, good = good, 2 * good
            if good > MAX_FIELD_CUTOFF:
                raise ValueError(f"No field cutoff below {MAX_FIELD_CUTOFF} works.")
        while good - bad > 1:
            middle = (good + bad) // 2
            if kappa(middle) > 0.0:
                good = middle
            else:
                bad = middle

    constant, _ = _field_excess(good, h_star, effective_gamma, alpha, c)
    result = BetaCBound(
        alpha=alpha,
        gamma=gamma,
        h_star=h_star,
        c=c,
        kc_variant=kc_variant,
        alpha_prime=alpha_prime,
        beta_c=beta_threshold(kappa(good), alpha_prime),
        L_required=good,
        h_threshold=None,
        field_constant=constant,
        regime="field",
    )
    LOGGER.info(
        f"✅ Field cutoff L = {good} (C = {constant:.4g}), "
        f"beta_c <= {result.beta_c:.6g}."
    )
    return result


def _critical_bound(
    alpha: float, gamma: float, h_star: float, c: float, kc_variant: KcVariant
) -> BetaCBound:
    coefficient = _peierls_coefficient(alpha, c, kc_variant) * _zeta(alpha)
    # A faster decay is dominated by gamma = 1 site by site.
    dominating = min(gamma, 1.0)
    unit_field = FieldProfile(1.0, dominating, 1)
    constant = field_bound_constant(_field_samples(1, c), unit_field, alpha)
    factor = 1.0 / (1.0 - dominating) if dominating < 1.0 else 1.0
    h_threshold = coefficient / (constant * factor) if constant > 0 else math.inf

    if abs(h_star) >= h_threshold:
        LOGGER.warning(
            f"⚠️ |h*| = {abs(h_star)} reaches the critical threshold "
            f"{h_threshold:.6g}; no beta_c bound."
        )
        beta_c = math.inf
    else:
        kappa = coefficient - constant * factor * abs(h_star)
        beta_c = beta_threshold(kappa, alpha)
    return BetaCBound(
        alpha=alpha,
        gamma=gamma,
        h_star=h_star,
        c=c,
        kc_variant=kc_variant,
        alpha_prime=alpha,
        beta_c=beta_c,
        L_required=1,
        h_threshold=h_threshold,
        field_constant=constant,
        regime="critical",
    )
