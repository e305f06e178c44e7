"""
Metropolis Monte Carlo for the long-range chain in a finite window.

This module provides single-site Metropolis dynamics with uniform boundary
conditions and decaying fields. It includes:
    - SimParams and Measurement records.
    - The local field cache that makes each proposal O(1).
    - A numba kernel that runs blocks of sweeps on pre-drawn random numbers.
    - `run` for one simulation and `gap_scan` for paired plus/minus runs over a grid.

The coupling to the outside of the window never changes; it is folded into the
cache once, as a constant per-site field.
"""

import itertools
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd
from numba import njit

from dyson.chain.constants import (
    BATCH_MEANS,
    SIMULATION_COLUMNS,
    SIMULATION_EXTRA_COLUMNS,
    SWEEPS_PER_CHUNK,
    Boundary,
)
from dyson.chain.lattice_core import (
    CouplingParams,
    FieldProfile,
    SpinConfiguration,
    boundary_tails,
    coupling_table,
)
from dyson.lib.logging_utils import LOGGER
from dyson.lib.run_config import MAX_SEED
from dyson.lib.task_utils import run_batched, spawn_seeds


@dataclass(frozen=True)
class SimParams:
    """
    Parameters of one Metropolis run.

    Measurements are taken after `burn_in` sweeps, every `measure_every` sweeps.
    """

    coupling: CouplingParams
    field: FieldProfile
    beta: float
    window_radius: int
    boundary: Boundary
    sweeps: int
    burn_in: int
    seed: int
    measure_every: int = 1

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}.")
        if self.window_radius < 0:
            raise ValueError(f"window_radius must be >= 0, got {self.window_radius}.")
        if self.sweeps <= 0:
            raise ValueError(f"sweeps must be positive, got {self.sweeps}.")
        if not 0 <= self.burn_in < self.sweeps:
            raise ValueError(
                f"burn_in must satisfy 0 <= burn_in < sweeps, got {self.burn_in} "
                f"with sweeps = {self.sweeps}."
            )
        if self.measure_every < 1:
            raise ValueError(f"measure_every must be >= 1, got {self.measure_every}.")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be in [0, 2^64), got {self.seed}.")
        object.__setattr__(self, "boundary", Boundary.parse(self.boundary))

    @property
    def size(self) -> int:
        return 2 * self.window_radius + 1

    def to_record(self) -> Dict[str, object]:
        """
        Flat parameter record used as CSV columns.
        """

        return {
            "alpha": self.coupling.alpha,
            "gamma": self.field.gamma,
            "h_star": self.field.h_star,
            "beta": self.beta,
            "N": self.window_radius,
            "boundary": self.boundary.value,
            "seed": self.seed,
            "j1": self.coupling.j1,
            "cutoff_L": self.field.cutoff_L,
            "sweeps": self.sweeps,
            "burn_in": self.burn_in,
            "measure_every": self.measure_every,
        }


@dataclass(frozen=True)
class Measurement:
    mean_spin_origin: float
    mean_magnetization: float
    prob_origin_minus: float
    std_error: float  # Batch-means standard error of mean_spin_origin.
    samples: int

    def to_record(self) -> Dict[str, object]:
        return {
            "mean_spin_origin": self.mean_spin_origin,
            "mean_magnetization": self.mean_magnetization,
            "prob_origin_minus": self.prob_origin_minus,
            "std_error": self.std_error,
            "samples": self.samples,
        }


# --------------------------------------------------------------------------------------
# Local fields
# --------------------------------------------------------------------------------------


def local_field_cache(sigma: SpinConfiguration, cp: CouplingParams) -> np.ndarray:
    """
    For each window site, sum_{y != x} J(|x-y|) sigma_y including the boundary.

    :param sigma: Spin configuration.
    :param cp: Coupling parameters.
    :return: Array of length 2N+1.
    """

    size = sigma.size
    table = coupling_table(cp, max(size - 1, 1))[:size]
    kernel = np.concatenate((table[:0:-1], table))
    inside = np.convolve(sigma.array.astype(np.float64), kernel, mode="valid")
    return inside + sigma.boundary.sign * boundary_tails(cp, sigma.window_radius)


def cached_flip_cost(
    spins: np.ndarray, local: np.ndarray, fields: np.ndarray, index: int
) -> float:
    """
    Energy change of flipping spin `index`, read from the cache.
    """

    return float(spins[index] * (local[index] + fields[index]))


@njit(cache=True)
def _apply_flip(spins, local, couplings, index):
    spin = spins[index]
    spins[index] = -spin
    for j in range(spins.shape[0]):
        local[j] -= 2.0 * spin * couplings[abs(j - index)]


@njit(cache=True)
def _metropolis_sweeps(
    spins, local, fields, couplings, beta, sites, uniforms, origin, origins, means
):
    """
    Run one block of sweeps in place and record the origin spin and the
    magnetization after each sweep.
    """

    size = spins.shape[0]
    for sweep in range(sites.shape[0]):
        for step in range(size):
            index = sites[sweep, step]
            cost = spins[index] * (local[index] + fields[index])
            if cost <= 0.0 or uniforms[sweep, step] < math.exp(-beta * cost):
                _apply_flip(spins, local, couplings, index)
        origins[sweep] = spins[origin]
        means[sweep] = spins.sum() / size


def _batch_means_error(values: np.ndarray) -> float:
    batches = min(BATCH_MEANS, values.size)
    if batches < 2:
        return math.nan
    means = np.array([chunk.mean() for chunk in np.array_split(values, batches)])
    return float(means.std(ddof=1) / math.sqrt(batches))


def run(params: SimParams) -> Measurement:
    """
    Metropolis run started from the configuration aligned with the boundary.

    Sites are proposed uniformly, one sweep being 2N+1 proposals, and a flip is
    accepted with probability min(1, e^(-beta dH)). The result depends only on
    the parameters, seed included.

    :param params: Simulation parameters.
    :return: Averages over the measured sweeps.
    """

    sigma = SpinConfiguration.aligned(params.window_radius, params.boundary)
    size = sigma.size
    spins = sigma.array.astype(np.float64)
    local = local_field_cache(sigma, params.coupling)
    fields = params.field.fields(sigma.sites)
    couplings = coupling_table(params.coupling, max(size - 1, 1))
    rng = np.random.Generator(np.random.PCG64(params.seed))

    origins = np.empty(params.sweeps, dtype=np.float64)
    means = np.empty(params.sweeps, dtype=np.float64)
    for start in range(0, params.sweeps, SWEEPS_PER_CHUNK):
        count = min(SWEEPS_PER_CHUNK, params.sweeps - start)
        sites = rng.integers(0, size, size=(count, size))
        uniforms = rng.random((count, size))
        _metropolis_sweeps(
            spins,
            local,
            fields,
            couplings,
            float(params.beta),
            sites,
            uniforms,
            params.window_radius,
            origins[start : start + count],
            means[start : start + count],
        )

    measured = slice(params.burn_in, params.sweeps, params.measure_every)
    origin_samples = origins[measured]
    mean_spin = float(origin_samples.mean())
    return Measurement(
        mean_spin_origin=mean_spin,
        mean_magnetization=float(means[measured].mean()),
        prob_origin_minus=float(np.mean(origin_samples < 0)),
        std_error=_batch_means_error(origin_samples),
        samples=int(origin_samples.size),
    )


def measurement_record(
    params: SimParams, measurement: Measurement
) -> Dict[str, object]:
    record = params.to_record()
    record.update(measurement.to_record())
    return record


def measurement_frame(records: Sequence[Dict[str, object]]) -> pd.DataFrame:
    """
    Table of records with the standard columns first and any extra ones after.
    """

    frame = pd.DataFrame.from_records(list(records))
    leading = [c for c in SIMULATION_COLUMNS + SIMULATION_EXTRA_COLUMNS if c in frame]
    return frame[leading + [c for c in frame.columns if c not in leading]]


def gap_scan(
    base: SimParams,
    betas: Sequence[float],
    gammas: Sequence[float],
    window_radii: Sequence[int],
    n_jobs: int = 1,
) -> pd.DataFrame:
    """
    Paired plus/minus runs over the grid betas x gammas x window_radii.

    Every run gets its own seed spawned from `base.seed` in canonical grid order,
    so the table does not depend on `n_jobs`. Each row carries the gap
    mean_spin_origin(plus) - mean_spin_origin(minus) of its grid point.

    :param base: Parameters shared by every run.
    :param betas: Inverse temperatures.
    :param gammas: Field decay exponents.
    :param window_radii: Window radii N.
    :param n_jobs: Maximum number of parallel workers.
    :return: One row per run, sorted by parameters.
    """

    grid = list(itertools.product(sorted(betas), sorted(gammas), sorted(window_radii)))
    tasks: List[SimParams] = []
    for beta, gamma, radius in grid:
        for boundary in (Boundary.PLUS, Boundary.MINUS):
            tasks.append(
                replace(
                    base,
                    beta=beta,
                    field=replace(base.field, gamma=gamma),
                    window_radius=radius,
                    boundary=boundary,
                )
            )
    seeds = spawn_seeds(base.seed, len(tasks))
    tasks = [replace(task, seed=seed) for task, seed in zip(tasks, seeds)]
    LOGGER.info(
        f"📊 Scanning {len(grid)} grid points ({len(tasks)} runs, n_jobs = {n_jobs})."
    )
    measurements = run_batched(run, tasks, n_jobs=n_jobs)

    records = [measurement_record(t, m) for t, m in zip(tasks, measurements)]
    for plus, minus in zip(records[::2], records[1::2]):
        gap = plus["mean_spin_origin"] - minus["mean_spin_origin"]
        plus["gap"] = minus["gap"] = gap
        LOGGER.info(
            f"beta = {plus['beta']}, gamma = {plus['gamma']}, N = {plus['N']}: "
            f"gap = {gap:.4f}"
        )
    frame = measurement_frame(records)
    frame = frame.sort_values(["beta", "gamma", "N", "boundary"], kind="stable")
    return frame.reset_index(drop=True)
