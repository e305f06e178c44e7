"""
Triangles and contours of a spin configuration with uniform boundary condition.

This module provides the geometric decomposition of a configuration into
excitations and its inverse. It includes:
    - Spin-flip points on the dual lattice and their perturbed positions.
    - Triangle construction by repeated pairing of the closest active flip points.
    - The inverse map from a triangle family back to spins.
    - Grouping of triangles into well-separated contours and a certificate check.
    - Contour energies, conditional energies and contour norms.

Dual-lattice sites are half-integers stored as floats, which represent them exactly.
"""

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from dyson.chain.constants import DEFAULT_GROUPING_C, Boundary
from dyson.chain.lattice_core import (
    ZERO_FIELD,
    CouplingParams,
    FieldProfile,
    SpinConfiguration,
    hamiltonian,
)
from dyson.chain.rigor_bounds import chi
from dyson.lib.logging_utils import LOGGER


def _is_half_integer(value: float) -> bool:
    doubled = 2.0 * value
    return doubled == math.floor(doubled) and int(doubled) % 2 != 0


# --------------------------------------------------------------------------------------
# Types
# --------------------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Triangle:
    """
    One excitation: the flipped interval between two paired flip points.

    `left` and `right` are the dual-lattice endpoints x- < x+; the base is the set of
    integer sites between them and the mass is their difference.
    """

    left: float
    right: float

    def __post_init__(self):
        if not (_is_half_integer(self.left) and _is_half_integer(self.right)):
            raise ValueError(
                f"Triangle endpoints must be half-integers, got ({self.left}, "
                f"{self.right})."
            )
        if not self.left < self.right:
            raise ValueError(
                f"Triangle needs left < right, got {self.left}, {self.right}."
            )
        object.__setattr__(self, "left", float(self.left))
        object.__setattr__(self, "right", float(self.right))

    @classmethod
    def from_sites(cls, first_site: int, last_site: int) -> "Triangle":
        """
        Triangle whose base is the integer interval [first_site, last_site].
        """

        return cls(first_site - 0.5, last_site + 0.5)

    @property
    def mass(self) -> int:
        return int(self.right - self.left)

    @property
    def first_site(self) -> int:
        return int(self.left + 0.5)

    @property
    def last_site(self) -> int:
        return int(self.right - 0.5)

    @property
    def base_sites(self) -> range:
        return range(self.first_site, self.last_site + 1)

    def contains_site(self, x: int) -> bool:
        return self.left < x < self.right

    def distance_to(self, other: "Triangle") -> int:
        """
        Minimal distance between the flip points of the two triangles.
        """

        return int(
            min(
                abs(self.left - other.left),
                abs(self.left - other.right),
                abs(self.right - other.left),
                abs(self.right - other.right),
            )
        )

    def contains_triangle(self, other: "Triangle") -> bool:
        """
        Whether the base of `other` lies strictly inside this base.
        """

        return self.left < other.left and other.right < self.right

    def is_disjoint_from(self, other: "Triangle") -> bool:
        return self.right < other.left or other.right < self.left

    def shifted(self, offset: int) -> "Triangle":
        return Triangle(self.left + offset, self.right + offset)

    def to_dict(self) -> Dict[str, float]:
        return {"left": self.left, "right": self.right, "mass": self.mass}


@dataclass(frozen=True)
class TriangleFamily:
    """
    Triangles of one configuration, sorted by left endpoint.
    """

    triangles: Tuple[Triangle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "triangles", tuple(sorted(self.triangles)))

    def __len__(self) -> int:
        return len(self.triangles)

    def __iter__(self):
        return iter(self.triangles)

    @property
    def total_mass(self) -> int:
        return sum(t.mass for t in self.triangles)

    def compatibility_violations(self) -> List[Tuple[Triangle, Triangle]]:
        """
        Pairs violating d(T, T') >= min(|T|, |T'|) or overlapping partially.
        """

        violations = []
        for i, first in enumerate(self.triangles):
            for second in self.triangles[i + 1 :]:
                nested = first.contains_triangle(second) or second.contains_triangle(
                    first
                )
                partial = not nested and not first.is_disjoint_from(second)
                if partial or first.distance_to(second) < min(first.mass, second.mass):
                    violations.append((first, second))
        return violations

    def is_compatible(self) -> bool:
        return not self.compatibility_violations()

    def to_list(self) -> List[Dict[str, float]]:
        return [t.to_dict() for t in self.triangles]


@dataclass(frozen=True)
class Contour:
    """
    A group of triangles; mass and base are derived from the triangles.
    """

    triangles: Tuple[Triangle, ...]

    def __post_init__(self):
        object.__setattr__(self, "triangles", tuple(sorted(self.triangles)))

    @property
    def mass(self) -> int:
        return sum(t.mass for t in self.triangles)

    @cached_property
    def base(self) -> FrozenSet[int]:
        """
        Union of the base sites of all triangles.
        """

        sites = set()
        for triangle in self.triangles:
            sites.update(triangle.base_sites)
        return frozenset(sites)

    @property
    def leftmost(self) -> float:
        return min(t.left for t in self.triangles)

    @property
    def rightmost(self) -> float:
        return max(t.right for t in self.triangles)

    def contains_site(self, x: int) -> bool:
        return any(t.contains_site(x) for t in self.triangles)

    def distance_to(self, other: "Contour") -> int:
        return min(a.distance_to(b) for a in self.triangles for b in other.triangles)

    def shifted(self, offset: int) -> "Contour":
        return Contour(tuple(t.shifted(offset) for t in self.triangles))

    def to_dict(self) -> Dict[str, object]:
        return {"triangles": [t.to_dict() for t in self.triangles], "mass": self.mass}


@dataclass(frozen=True)
class ContourConfiguration:
    """
    A partition of a triangle family into contours, with its grouping constant.
    """

    contours: Tuple[Contour, ...]
    grouping_c: float = DEFAULT_GROUPING_C

    def __post_init__(self):
        if not self.grouping_c > 1.0:
            raise ValueError(
                f"Grouping constant c must exceed 1, got {self.grouping_c}."
            )
        ordered = tuple(sorted(self.contours, key=lambda g: g.triangles))
        object.__setattr__(self, "contours", ordered)

    def __len__(self) -> int:
        return len(self.contours)

    def __contains__(self, contour: Contour) -> bool:
        return contour in self.contours

    @property
    def family(self) -> TriangleFamily:
        return TriangleFamily(tuple(t for g in self.contours for t in g.triangles))

    def without(self, contour: Contour) -> "ContourConfiguration":
        """
        The configuration with one contour removed.

        :raises ValueError: If the contour is not part of the configuration.
        """

        if contour not in self.contours:
            raise ValueError("Contour is not part of the configuration.")
        remaining = list(self.contours)
        remaining.remove(contour)
        return ContourConfiguration(tuple(remaining), self.grouping_c)

    def to_dict(self) -> Dict[str, object]:
        return {"c": self.grouping_c, "contours": [g.to_dict() for g in self.contours]}


@dataclass(frozen=True)
class SeparationViolation:
    """
    A pair of contours that fails the separation requirements.
    """

    first: int  # Index of the first contour.
    second: int  # Index of the second contour.
    reason: str  # "distance" or "base".
    distance: int  # d(first, second).
    threshold: float  # c * min(|first|, |second|)^3.


# --------------------------------------------------------------------------------------
# Spins <-> triangles
# --------------------------------------------------------------------------------------


def spin_flip_points(sigma: SpinConfiguration) -> List[float]:
    """
    Dual-lattice sites between unequal neighboring spins, boundary included.

    :param sigma: Spin configuration.
    :return: Sorted half-integers; always an even number of them.
    """

    omega = sigma.boundary.sign
    extended = np.concatenate(([omega], sigma.array, [omega]))
    positions = np.flatnonzero(extended[:-1] != extended[1:])
    return [float(k - sigma.window_radius) - 0.5 for k in positions]


def _check_even(flips: Sequence[float]) -> None:
    if len(flips) % 2:
        raise ValueError(
            f"Odd number of flip points ({len(flips)}) is impossible under a uniform "
            f"boundary condition."
        )


def assign_bases(flips: Sequence[float]) -> List[Fraction]:
    """
    Perturbed positions r_k = i_k + 3^(-k)/100 for k = 1..n.

    All pairwise differences of the perturbed positions are distinct, which makes
    the closest-pair process unambiguous.

    :param flips: Sorted flip points.
    :return: Exact rational perturbed positions.
    :raises ValueError: If the number of flip points is odd.
    """

    _check_even(flips)
    return [
        Fraction(flip) + Fraction(1, 100 * 3**k)
        for k, flip in enumerate(flips, start=1)
    ]


def pair_flip_points(flips: Sequence[float]) -> List[Triangle]:
    """
    Pair flip points by repeatedly matching the two closest active perturbed points.

    The closest pair of a sorted point set is always adjacent. For adjacent points
    a < b the perturbed distance is (b - a) minus a correction below 1/300 that is
    larger for a smaller index of a, so comparing (integer distance, index of the
    left point) orders pairs exactly as the perturbed distances do.

    :param flips: Sorted flip points (even count).
    :return: Triangles in the order they were emitted.
    """

    count = len(flips)
    _check_even(flips)
    previous = list(range(-1, count - 1))
    following = list(range(1, count + 1))
    active = [True] * count
    heap = [(flips[k + 1] - flips[k], k, k + 1) for k in range(count - 1)]
    heapq.heapify(heap)

    triangles = []
    while heap:
        _, left, right = heapq.heappop(heap)
        if not (active[left] and active[right]) or following[left] != right:
            continue
        triangles.append(Triangle(flips[left], flips[right]))
        active[left] = active[right] = False
        before, after = previous[left], following[right]
        if before >= 0:
            following[before] = after
        if after < count:
            previous[after] = before
        if before >= 0 and after < count:
            heapq.heappush(heap, (flips[after] - flips[before], before, after))
    return triangles


def build_triangles(sigma: SpinConfiguration) -> TriangleFamily:
    """
    Triangle family of a configuration.

    :param sigma: Spin configuration with uniform boundary condition.
    :return: The triangles, sorted by left endpoint.
    """

    return TriangleFamily(tuple(pair_flip_points(spin_flip_points(sigma))))


def triangles_to_spins(
    family: Union[TriangleFamily, Iterable[Triangle]],
    window_radius: int,
    boundary: Boundary = Boundary.PLUS,
) -> SpinConfiguration:
    """
    Configuration obtained by flipping the boundary spin once per covering triangle.

    :param family: Triangles whose bases lie inside the window.
    :param window_radius: N.
    :param boundary: Boundary condition.
    :return: The spin configuration.
    :raises ValueError: If a base leaves the window.
    """

    boundary = Boundary.parse(boundary)
    size = 2 * window_radius + 1
    depth_changes = np.zeros(size + 1, dtype=np.int64)
    for triangle in family:
        if triangle.first_site < -window_radius or triangle.last_site > window_radius:
            raise ValueError(
                f"Triangle base [{triangle.first_site}, {triangle.last_site}] leaves "
                f"the window [-{window_radius}, {window_radius}]."
            )
        depth_changes[triangle.first_site + window_radius] += 1
        depth_changes[triangle.last_site + window_radius + 1] -= 1
    depth = np.cumsum(depth_changes[:-1])
    spins = boundary.sign * np.where(depth % 2 == 0, 1, -1)
    return SpinConfiguration(window_radius, tuple(spins.tolist()), boundary)


# --------------------------------------------------------------------------------------
# Contours
# --------------------------------------------------------------------------------------


def _bases_compatible(inner: FrozenSet[int], outer: Contour) -> bool:
    """
    Whether `inner` lies inside or outside each triangle base of `outer`.
    """

    for triangle in outer.triangles:
        low, high = triangle.first_site, triangle.last_site
        inside = [low <= x <= high for x in inner]
        if any(inside) and not all(inside):
            return False
    return True


def base_alternative_holds(first: Contour, second: Contour) -> bool:
    """
    Disjoint bases, or nested bases where the inner one sits inside or outside every
    triangle of the outer contour.
    """

    a, b = first.base, second.base
    if a.isdisjoint(b):
        return True
    if a <= b and _bases_compatible(a, second):
        return True
    if b <= a and _bases_compatible(b, first):
        return True
    return False


def group_contours(
    family: Union[TriangleFamily, Iterable[Triangle]], c: float = DEFAULT_GROUPING_C
) -> ContourConfiguration:
    """
    Partition triangles into contours that are pairwise well separated.

    Starting from singletons, the closest pair of groups with
    d(G, G') <= c min(|G|, |G'|)^3 is merged (ties go to the pair with the leftmost
    bases) until none remains. Pairs failing the base alternative are then merged
    the same way, and the distance pass resumes, until both conditions hold for
    every pair.

    :param family: Triangles of one configuration.
    :param c: Separation constant, greater than 1.
    :return: The contour configuration.
    """

    if not c > 1.0:
        raise ValueError(f"Grouping constant c must exceed 1, got {c}.")
    triangles = list(family)
    count = len(triangles)
    if count == 0:
        return ContourConfiguration((), c)

    ends = np.array([[t.left, t.right] for t in triangles])
    gaps = np.abs(ends[:, None, :, None] - ends[None, :, None, :])
    distances = gaps.min(axis=(2, 3))
    np.fill_diagonal(distances, np.inf)
    masses = np.array([t.mass for t in triangles], dtype=np.float64)
    lefts = ends[:, 0].copy()
    members: List[List[int]] = [[k] for k in range(count)]
    alive = np.ones(count, dtype=bool)

    def merge(a: int, b: int) -> None:
        distances[a, :] = np.minimum(distances[a, :], distances[b, :])
        distances[:, a] = distances[a, :]
        distances[a, a] = np.inf
        distances[b, :] = np.inf
        distances[:, b] = np.inf
        masses[a] += masses[b]
        lefts[a] = min(lefts[a], lefts[b])
        members[a].extend(members[b])
        members[b] = []
        alive[b] = False

    def pick(candidates: np.ndarray) -> Optional[Tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(candidates, k=1))
        if rows.size == 0:
            return None
        low = np.minimum(lefts[rows], lefts[cols])
        high = np.maximum(lefts[rows], lefts[cols])
        best = np.lexsort((high, low, distances[rows, cols]))[0]
        return int(rows[best]), int(cols[best])

    merges = 0
    while alive.sum() > 1:
        smaller = np.minimum(masses[:, None], masses[None, :])
        both_alive = alive[:, None] & alive[None, :]
        too_close = both_alive & (distances <= c * smaller**3)
        pair = pick(too_close)
        if pair is None:
            groups = {
                k: Contour(tuple(triangles[i] for i in members[k]))
                for k in np.flatnonzero(alive)
            }
            crossing = np.zeros_like(too_close)
            keys = sorted(groups)
            for i, a in enumerate(keys):
                for b in keys[i + 1 :]:
                    if not base_alternative_holds(groups[a], groups[b]):
                        crossing[a, b] = crossing[b, a] = True
            pair = pick(crossing)
            if pair is None:
                break
        merge(*pair)
        merges += 1

    contours = tuple(
        Contour(tuple(triangles[i] for i in members[k])) for k in np.flatnonzero(alive)
    )
    LOGGER.debug(
        f"Grouped {count} triangles into {len(contours)} contours ({merges} merges)."
    )
    return ContourConfiguration(contours, c)


def check_separation(
    cfg: ContourConfiguration,
) -> Tuple[bool, List[SeparationViolation]]:
    """
    Verify the separation requirements for every pair of contours.

    :param cfg: Contour configuration.
    :return: Whether all pairs pass, and the violations found.
    """

    violations = []
    contours = cfg.contours
    for i, first in enumerate(contours):
        for j in range(i + 1, len(contours)):
            second = contours[j]
            distance = first.distance_to(second)
            threshold = cfg.grouping_c * min(first.mass, second.mass) ** 3
            if not distance > threshold:
                violations.append(
                    SeparationViolation(i, j, "distance", distance, threshold)
                )
            if not base_alternative_holds(first, second):
                violations.append(
                    SeparationViolation(i, j, "base", distance, threshold)
                )
    return not violations, violations


# --------------------------------------------------------------------------------------
# Energies and norms
# --------------------------------------------------------------------------------------


def configuration_energy(
    contours: Union[ContourConfiguration, Iterable[Contour]],
    cp: CouplingParams,
    fp: Optional[FieldProfile] = None,
) -> float:
    """
    Energy of the plus-boundary configuration whose contours are given.

    The window is the smallest one containing every base; the boundary tails make
    the result independent of the window.

    :param contours: Contours (a configuration or any iterable of them).
    :param cp: Coupling parameters.
    :param fp: Optional field profile (zero field if None).
    :return: H+(contours).
    """

    if isinstance(contours, ContourConfiguration):
        contours = contours.contours
    triangles = [t for g in contours for t in g.triangles]
    if not triangles:
        return 0.0
    radius = max(max(abs(t.first_site), abs(t.last_site)) for t in triangles)
    sigma = triangles_to_spins(triangles, radius, Boundary.PLUS)
    return hamiltonian(sigma, cp, fp or ZERO_FIELD).total


def contour_energy(
    gamma0: Contour, cp: CouplingParams, fp: Optional[FieldProfile] = None
) -> float:
    """
    Energy of the configuration whose only contour is `gamma0`.
    """

    return configuration_energy([gamma0], cp, fp)


def conditional_energy(
    gamma0: Contour,
    rest: ContourConfiguration,
    cp: CouplingParams,
    fp: Optional[FieldProfile] = None,
) -> float:
    """
    H+(configuration) - H+(configuration without gamma0).

    :param gamma0: A contour of the configuration.
    :param rest: The full contour configuration containing gamma0.
    :param cp: Coupling parameters.
    :param fp: Optional field profile.
    :return: The conditional energy of gamma0.
    :raises ValueError: If gamma0 is not in the configuration.
    """

    if gamma0 not in rest:
        raise ValueError("Contour is not part of the configuration.")
    return configuration_energy(rest, cp, fp) - configuration_energy(
        rest.without(gamma0), cp, fp
    )


def contour_norm(gamma0: Contour, alpha: float) -> float:
    """
    Sum of chi_alpha(|T|) over the triangles of the contour.
    """

    return math.fsum(chi(t.mass, alpha) for t in gamma0.triangles)
