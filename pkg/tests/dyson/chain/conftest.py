from typing import Callable, List

import numpy as np
import pytest

from dyson.chain.constants import Boundary
from dyson.chain.lattice_core import SpinConfiguration


@pytest.fixture
def rng() -> np.random.Generator:
    """
    Seeded generator shared by property tests.
    """

    return np.random.default_rng(20240917)


@pytest.fixture
def random_spins(
    rng: np.random.Generator,
) -> Callable[[int, float, Boundary], SpinConfiguration]:
    """
    Factory of random configurations with a given minus density.
    """

    def make(
        window_radius: int, minus_density: float = 0.3, boundary=Boundary.PLUS
    ) -> SpinConfiguration:
        size = 2 * window_radius + 1
        spins = np.where(rng.random(size) < minus_density, -1, 1)
        if Boundary.parse(boundary) is Boundary.MINUS:
            spins = -spins
        return SpinConfiguration(window_radius, tuple(spins.tolist()), boundary)

    return make


@pytest.fixture
def minus_at() -> Callable[[int, List[int]], SpinConfiguration]:
    """
    Factory of plus-boundary configurations with minus spins exactly at `sites`.
    """

    def make(window_radius: int, sites: List[int]) -> SpinConfiguration:
        window = range(-window_radius, window_radius + 1)
        spins = [-1 if x in sites else 1 for x in window]
        return SpinConfiguration(window_radius, tuple(spins), Boundary.PLUS)

    return make
