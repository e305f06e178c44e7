"""
Spin configurations, couplings, fields and exact energies of the long-range chain.

This module provides the model layer every other module builds on. It includes:
    - CouplingParams and FieldProfile, the validated model parameters.
    - SpinConfiguration, a finite window of spins with a uniform boundary condition.
    - Coupling and tail evaluation, including analytic infinite tails.
    - The Hamiltonian split into bulk, boundary and field terms, and single-flip costs.
    - Exact enumeration of the partition function for tiny windows.

Energies follow the convention in which the field is charged to minus spins:
    H = 1/2 sum_{x != y} J(|x-y|) 1{s_x != s_y} + sum_x h_x 1{s_x = -1},
so a positive h_star favors plus spins. The alternative -sum h_x s_x differs by a
configuration-independent constant and a factor 2 in h; no rescaling is applied.
"""

import math
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Any, Dict, NamedTuple, Sequence, Tuple

import numpy as np

from dyson.chain.constants import MAX_EXACT_SITES, Boundary
from dyson.chain.schemas import SpinConfigurationModel
from dyson.lib.series_utils import power_tail, power_tail_table


@dataclass(frozen=True)
class CouplingParams:
    """
    Couplings J(1) = j1 and J(d) = d^(-2+alpha) for d >= 2.
    """

    alpha: float
    j1: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must satisfy 0 <= alpha < 1, got {self.alpha}.")
        if not self.j1 > 0.0:
            raise ValueError(f"j1 must be positive, got {self.j1}.")

    @property
    def decay_exponent(self) -> float:
        """
        Exponent s = 2 - alpha of the power law.
        """

        return 2.0 - self.alpha


@dataclass(frozen=True)
class FieldProfile:
    """
    External field h_x = h_star (1+|x|)^(-gamma) for |x| >= cutoff_L and 0 inside.

    cutoff_L = 0 gives the unmodified field on every site.
    """

    h_star: float = 0.0
    gamma: float = 1.0
    cutoff_L: int = 0

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}.")
        if int(self.cutoff_L) != self.cutoff_L or self.cutoff_L < 0:
            raise ValueError(
                f"cutoff_L must be a nonnegative integer, got {self.cutoff_L}."
            )
        object.__setattr__(self, "cutoff_L", int(self.cutoff_L))

    @property
    def is_zero(self) -> bool:
        return self.h_star == 0.0

    def field(self, x: int) -> float:
        """
        Field value at site x.

        :param x: Lattice site.
        :return: h_x.
        """

        if abs(x) < self.cutoff_L:
            return 0.0
        return self.h_star * (1.0 + abs(x)) ** (-self.gamma)

    def fields(self, sites: np.ndarray) -> np.ndarray:
        """
        Vectorized field values at the given sites.

        :param sites: Integer sites.
        :return: Array of h_x.
        """

        distance = np.abs(np.asarray(sites, dtype=np.float64))
        values = self.h_star * (1.0 + distance) ** (-self.gamma)
        return np.where(distance < self.cutoff_L, 0.0, values)

    def with_cutoff(self, cutoff_L: int) -> "FieldProfile":
        return FieldProfile(self.h_star, self.gamma, cutoff_L)


ZERO_FIELD = FieldProfile()


@dataclass(frozen=True)
class SpinConfiguration:
    """
    Spins on the window [-N, N] plus a uniform boundary condition outside it.

    Spins are stored as a tuple so that configurations are hashable values; use
    `array` for numerics. Index i of the tuple is site x = i - N.
    """

    window_radius: int
    spins: Tuple[int, ...]
    boundary: Boundary = Boundary.PLUS

    def __post_init__(self):
        if int(self.window_radius) != self.window_radius or self.window_radius < 0:
            raise ValueError(
                f"window_radius must be a nonnegative integer, got "
                f"{self.window_radius}."
            )
        spins = tuple(int(s) for s in self.spins)
        if len(spins) != 2 * self.window_radius + 1:
            raise ValueError(
                f"Expected 2N+1 = {2 * self.window_radius + 1} spins, got {len(spins)}."
            )
        if any(s not in (-1, 1) for s in spins):
            raise ValueError("Every spin must be exactly +1 or -1.")
        object.__setattr__(self, "window_radius", int(self.window_radius))
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "boundary", Boundary.parse(self.boundary))

    @classmethod
    def aligned(cls, window_radius: int, boundary: Boundary) -> "SpinConfiguration":
        """
        Configuration equal to the boundary value everywhere.
        """

        boundary = Boundary.parse(boundary)
        return cls(window_radius, (boundary.sign,) * (2 * window_radius + 1), boundary)

    @classmethod
    def from_array(
        cls, spins: Sequence[int], boundary: Boundary = Boundary.PLUS
    ) -> "SpinConfiguration":
        """
        Build a configuration from an odd-length array of spins centered at 0.
        """

        spins = np.asarray(spins).astype(int).tolist()
        if len(spins) % 2 == 0:
            raise ValueError(f"Need an odd number of spins, got {len(spins)}.")
        return cls((len(spins) - 1) // 2, tuple(spins), boundary)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpinConfiguration":
        """
        Build a configuration from its JSON form, validated by the schema.
        """

        model = SpinConfigurationModel.model_validate(data)
        return cls(model.N, tuple(model.spins), model.boundary)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.window_radius,
            "boundary": self.boundary.value,
            "spins": list(self.spins),
        }

    @property
    def size(self) -> int:
        return len(self.spins)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.spins, dtype=np.int64)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.window_radius, self.window_radius + 1)

    def index_of(self, x: int) -> int:
        """
        Array index of site x.

        :raises ValueError: If x is outside the window.
        """

        if int(x) != x or abs(x) > self.window_radius:
            raise ValueError(
                f"Site {x} is outside the window [-N, N] with N = {self.window_radius}."
            )
        return int(x) + self.window_radius

    def spin_at(self, x: int) -> int:
        """
        Spin at any site of Z, using the boundary value outside the window.
        """

        if abs(x) > self.window_radius:
            return self.boundary.sign
        return self.spins[int(x) + self.window_radius]

    def flipped(self, x: int) -> "SpinConfiguration":
        index = self.index_of(x)
        spins = list(self.spins)
        spins[index] = -spins[index]
        return SpinConfiguration(self.window_radius, tuple(spins), self.boundary)

    def negated(self) -> "SpinConfiguration":
        """
        Global spin flip, including the boundary condition.
        """

        other = Boundary.MINUS if self.boundary is Boundary.PLUS else Boundary.PLUS
        return SpinConfiguration(
            self.window_radius, tuple(-s for s in self.spins), other
        )


@dataclass(frozen=True)
class EnergyBreakdown:
    """
    The three terms of the Hamiltonian on a window with boundary condition.
    """

    bulk: float
    boundary: float
    field: float
    total: float = dataclass_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.bulk + self.boundary + self.field)


class ExactMarginal(NamedTuple):
    partition_function: float
    prob_origin_minus: float


# --------------------------------------------------------------------------------------
# Couplings and tails
# --------------------------------------------------------------------------------------


def coupling_at(params: CouplingParams, d: int) -> float:
    """
    Coupling J(d).

    :param params: Coupling parameters.
    :param d: Distance, at least 1.
    :return: j1 if d = 1, else d^(-2+alpha).
    :raises ValueError: If d < 1.
    """

    if d < 1:
        raise ValueError(f"Coupling is defined for distances d >= 1, got {d}.")
    if d == 1:
        return params.j1
    return float(d) ** (-params.decay_exponent)


def tail_sum(params: CouplingParams, from_d: int) -> float:
    """
    Pure power-law tail sum_{d >= from_d} d^(-2+alpha).

    The d = 1 term is 1 regardless of j1; see `coupling_tail` for the coupling tail.

    :param params: Coupling parameters (alpha < 1 for convergence).
    :param from_d: First distance, at least 1.
    :return: The tail, accurate to about 1e-12.
    """

    if params.alpha >= 1.0:
        raise ValueError(f"Tail diverges for alpha = {params.alpha} >= 1.")
    return power_tail(params.decay_exponent, from_d)


def coupling_tail(params: CouplingParams, from_d: int) -> float:
    """
    Coupling tail sum_{d >= from_d} J(d), with J(1) = j1.
    """

    value = tail_sum(params, from_d)
    if from_d == 1:
        value += params.j1 - 1.0
    return value


def coupling_table(params: CouplingParams, max_d: int) -> np.ndarray:
    """
    Tabulate J(d) for d = 0..max_d with J(0) = 0 (no self-interaction).
    """

    table = np.zeros(max_d + 1, dtype=np.float64)
    if max_d >= 1:
        distances = np.arange(1, max_d + 1, dtype=np.float64)
        table[1:] = distances ** (-params.decay_exponent)
        table[1] = params.j1
    return table


def coupling_tail_table(params: CouplingParams, max_start: int) -> np.ndarray:
    """
    Tabulate sum_{d >= k} J(d) for k = 1..max_start (entry 0 is NaN).
    """

    table = power_tail_table(params.decay_exponent, max_start)
    table[1] += params.j1 - 1.0
    return table


def coupling_matrix(params: CouplingParams, window_radius: int) -> np.ndarray:
    """
    Matrix J(|x-y|) over the window with a zero diagonal.
    """

    size = 2 * window_radius + 1
    index = np.arange(size)
    table = coupling_table(params, max(size - 1, 1))
    return table[np.abs(index[:, None] - index[None, :])]


def boundary_tails(params: CouplingParams, window_radius: int) -> np.ndarray:
    """
    For each window site, the total coupling to all sites outside the window.

    Site index i (x = i - N) sees the left complement from distance i+1 and the
    right complement from distance 2N+1-i onward.

    :param params: Coupling parameters.
    :param window_radius: N.
    :return: Array B of length 2N+1.
    """

    size = 2 * window_radius + 1
    tails = coupling_tail_table(params, size)
    index = np.arange(size)
    return tails[index + 1] + tails[size - index]


# --------------------------------------------------------------------------------------
# Energies
# --------------------------------------------------------------------------------------


def hamiltonian(
    sigma: SpinConfiguration, cp: CouplingParams, fp: FieldProfile = ZERO_FIELD
) -> EnergyBreakdown:
    """
    Energy of a window configuration with its boundary condition.

    :param sigma: Spin configuration.
    :param cp: Coupling parameters.
    :param fp: Field profile.
    :return: Bulk, boundary and field terms.
    """

    spins = sigma.array
    couplings = coupling_matrix(cp, sigma.window_radius)
    mismatch = spins[:, None] != spins[None, :]
    bulk = 0.5 * float(np.sum(couplings[mismatch]))
    tails = boundary_tails(cp, sigma.window_radius)
    boundary = float(np.sum(tails[spins != sigma.boundary.sign]))
    field_term = float(np.sum(fp.fields(sigma.sites)[spins == -1]))
    return EnergyBreakdown(bulk=bulk, boundary=boundary, field=field_term)


def flip_cost(
    sigma: SpinConfiguration, cp: CouplingParams, fp: FieldProfile, x: int
) -> float:
    """
    Energy change from flipping the spin at site x, in O(window) operations.

    With s = sigma_x, the change is s * (sum_{y != x} J(|x-y|) s_y + omega B_x + h_x)
    where B_x is the coupling of x to the complement of the window.

    :param sigma: Spin configuration.
    :param cp: Coupling parameters.
    :param fp: Field profile.
    :param x: Site inside the window.
    :return: H(sigma with x flipped) - H(sigma).
    :raises ValueError: If x is outside the window.
    """

    index = sigma.index_of(x)
    spins = sigma.array.astype(np.float64)
    table = coupling_table(cp, max(sigma.size - 1, 1))
    row = table[np.abs(np.arange(sigma.size) - index)]
    tail = coupling_tail(cp, index + 1) + coupling_tail(cp, sigma.size - index)
    local = float(np.dot(row, spins)) + sigma.boundary.sign * tail
    return float(spins[index] * (local + fp.field(x)))


def exact_partition(
    cp: CouplingParams,
    fp: FieldProfile,
    window_radius: int,
    boundary: Boundary,
    beta: float,
    chunk_size: int = 1 << 15,
) -> ExactMarginal:
    """
    Partition function and marginal of the origin by enumerating every configuration.

    Energies are shifted by their minimum before exponentiation, so the marginal is
    accurate even when the partition function itself overflows.

    :param cp: Coupling parameters.
    :param fp: Field profile.
    :param window_radius: N, with 2N+1 <= 21.
    :param boundary: Boundary condition.
    :param beta: Inverse temperature, at least 0.
    :param chunk_size: Configurations evaluated per vectorized block.
    :return: Z and mu(sigma_0 = -1).
    :raises ValueError: If the window is too large or beta is negative.
    """

    size = 2 * window_radius + 1
    if size > MAX_EXACT_SITES:
        raise ValueError(
            f"Exact enumeration refused: window of {size} sites exceeds the limit of "
            f"{MAX_EXACT_SITES} sites (2^{size} configurations)."
        )
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}.")
    boundary = Boundary.parse(boundary)

    couplings = coupling_matrix(cp, window_radius)
    total_coupling = float(couplings.sum())
    tails = boundary_tails(cp, window_radius)
    fields = fp.fields(np.arange(-window_radius, window_radius + 1))
    bit_weights = 1 << np.arange(size, dtype=np.int64)

    count = 1 << size
    energies = np.empty(count, dtype=np.float64)
    origin_minus = np.empty(count, dtype=bool)
    for start in range(0, count, chunk_size):
        codes = np.arange(start, min(start + chunk_size, count), dtype=np.int64)
        spins = 1.0 - 2.0 * ((codes[:, None] & bit_weights[None, :]) > 0)
        pair_sum = np.einsum("ij,jk,ik->i", spins, couplings, spins)
        bulk = 0.25 * (total_coupling - pair_sum)
        boundary_term = 0.5 * ((1.0 - boundary.sign * spins) @ tails)
        field_term = 0.5 * ((1.0 - spins) @ fields)
        energies[start : start + len(codes)] = bulk + boundary_term + field_term
        origin_minus[start : start + len(codes)] = spins[:, window_radius] < 0

    ground = float(energies.min())
    weights = np.exp(-beta * (energies - ground))
    shifted_z = float(weights.sum())
    exponent = -beta * ground
    partition = shifted_z * math.exp(exponent) if exponent < 700.0 else math.inf
    return ExactMarginal(
        partition_function=partition,
        prob_origin_minus=float(weights[origin_minus].sum()) / shifted_z,
    )
