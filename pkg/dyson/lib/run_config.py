"""
Run configuration for simulation commands.

This module provides parsing and validation of the flat configuration files read by
the `simulate` and `scan` commands. It includes:
    - A python-dotenv based reader for `key = value` text files with comments.
    - SimConfigFile and ScanConfigFile pydantic models mirroring the simulation
      parameter names.
    - Master seed resolution from the command line, the environment or the file.
"""

import io
import os
from pathlib import Path
from typing import IO, Dict, List, Literal, Optional

from dotenv import dotenv_values
from dotenv.parser import parse_stream
from pydantic import BaseModel, ConfigDict, Field, field_validator


# Environment variable holding the master seed.
SEED_ENV_VAR = "DYSON_SEED"

# Seeds are 64-bit unsigned integers.
MAX_SEED = 2**64 - 1


def _check_bindings(stream: IO[str]) -> None:
    """
    Reject malformed lines, keys without a value and duplicate keys.

    :param stream: Configuration text.
    :raises ValueError: On the first offending line.
    """

    seen = set()
    for binding in parse_stream(stream):
        number = binding.original.line
        if binding.error:
            raise ValueError(f"Config line {number} is not of the form key = value.")
        if binding.key is None:
            continue
        if binding.value is None:
            raise ValueError(f"Config line {number} has no value for '{binding.key}'.")
        if binding.key in seen:
            raise ValueError(
                f"Config key '{binding.key}' is defined twice (line {number})."
            )
        seen.add(binding.key)


def parse_flat_config(text: str) -> Dict[str, str]:
    """
    Parse `key = value` lines with python-dotenv. Blank lines and `#` comments are
    ignored; values are taken literally, without variable expansion.

    :param text: Content of the configuration file.
    :return: Mapping from key to raw string value.
    :raises ValueError: On a malformed line, a key without value or a duplicate key.
    """

    _check_bindings(io.StringIO(text))
    values = dotenv_values(stream=io.StringIO(text), interpolate=False)
    return {key: value for key, value in values.items() if value is not None}


def load_flat_config(path: Path) -> Dict[str, str]:
    """
    Read and parse a flat configuration file.

    :param path: Path to the file.
    :return: Mapping from key to raw string value.
    :raises FileNotFoundError: If the file does not exist.
    """

    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}.")
    with open(path, encoding="utf-8") as stream:
        _check_bindings(stream)
    values = dotenv_values(path, interpolate=False, encoding="utf-8")
    return {key: value for key, value in values.items() if value is not None}


class SimConfigFile(BaseModel):
    """
    Validated content of a `simulate` configuration file.
    """

    model_config = ConfigDict(extra="forbid")

    # Coupling J(d) = d^(-2+alpha), J(1) = j1.
    alpha: float = Field(ge=0.0, lt=1.0)
    j1: float = Field(default=1.0, gt=0.0)

    # Field h_x = h_star (1+|x|)^(-gamma) outside the cutoff.
    h_star: float = 0.0
    gamma: float = Field(default=1.0, gt=0.0)
    cutoff_L: int = Field(default=0, ge=0)

    beta: float = Field(ge=0.0)
    window_radius: int = Field(ge=0)
    boundary: Literal["plus", "minus"]
    sweeps: int = Field(gt=0)
    burn_in: int = Field(ge=0)
    measure_every: int = Field(default=1, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, le=MAX_SEED)


def _split_list(value: object) -> object:
    """
    Split comma-separated grid values; leave other inputs to pydantic.
    """

    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


class ScanConfigFile(BaseModel):
    """
    Validated content of a `scan` configuration file.

    `beta`, `gamma` and `window_radius` hold comma-separated lists whose Cartesian
    product forms the scan grid. Both boundary conditions are always simulated.
    """

    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(ge=0.0, lt=1.0)
    j1: float = Field(default=1.0, gt=0.0)
    h_star: float = 0.0
    gamma: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    cutoff_L: int = Field(default=0, ge=0)
    beta: List[float] = Field(min_length=1)
    window_radius: List[int] = Field(min_length=1)
    sweeps: int = Field(gt=0)
    burn_in: int = Field(ge=0)
    measure_every: int = Field(default=1, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, le=MAX_SEED)
    n_jobs: int = Field(default=1, ge=1)

    @field_validator("beta", "gamma", "window_radius", mode="before")
    @classmethod
    def split_grid(cls, value: object) -> object:
        return _split_list(value)


def resolve_seed(flag_seed: Optional[int], config_seed: Optional[int] = None) -> int:
    """
    Resolve the master seed: flag, then DYSON_SEED, then the config file.

    :param flag_seed: Value of the `--seed` flag, or None.
    :param config_seed: Value of the `seed` config key, or None.
    :return: The master seed.
    :raises ValueError: If no source provides a seed or the seed is out of range.
    """

    if flag_seed is not None:
        seed, source = flag_seed, "--seed"
    elif os.environ.get(SEED_ENV_VAR):
        seed, source = os.environ[SEED_ENV_VAR], SEED_ENV_VAR
    elif config_seed is not None:
        seed, source = config_seed, "config"
    else:
        raise ValueError(
            f"No seed given: pass --seed, set {SEED_ENV_VAR} or add a seed key."
        )
    try:
        seed = int(seed)
    except (TypeError, ValueError) as e:
        raise ValueError(f"Seed from {source} is not an integer: {seed!r}.") from e
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"Seed from {source} must be in [0, 2^64), got {seed}.")
    return seed
