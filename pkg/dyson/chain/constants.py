"""
This module defines the enums, defaults and guards used across the long-range chain
package.

It also provides a registry of command outputs (file names, descriptions, log emoji)
so that the CLI and the tests agree on where every result is written.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple


class Boundary(Enum):
    """
    Uniform boundary condition outside the finite window.
    """

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        """
        Spin value imposed outside the window.
        """

        return 1 if self is Boundary.PLUS else -1

    @classmethod
    def parse(cls, value: object) -> "Boundary":
        """
        Accept an enum member, "plus"/"minus", "+"/"-" or +1/-1.

        :param value: Boundary member, name or sign.
        :return: Boundary member.
        """

        if isinstance(value, Boundary):
            return value
        aliases = {"plus": cls.PLUS, "+": cls.PLUS, "1": cls.PLUS, "+1": cls.PLUS}
        aliases.update({"minus": cls.MINUS, "-": cls.MINUS, "-1": cls.MINUS})
        key = str(value).strip().lower()
        if key not in aliases:
            raise ValueError(f"Unknown boundary condition: {value!r}.")
        return aliases[key]


class KcVariant(Enum):
    """
    Reading of the exponent in the quasi-additivity constant K_c(alpha).
    """

    PRINTED = "printed"  # 1 - alpha / c^(alpha-1) - pi^2/(6c).
    CORRECTED = "corrected"  # 1 - alpha / c^(1-alpha) - pi^2/(6c).


# --------------------------------------------------------------------------------------
# Defaults and guards
# --------------------------------------------------------------------------------------

# Separation constant c of the contour grouping.
DEFAULT_GROUPING_C = 10.0

# Grouping constant used by the entropy census.
DEFAULT_CENSUS_C = 2.0

# Largest L checked when certifying W_alpha(L) >= zeta_alpha chi_alpha(L).
DEFAULT_SEARCH_LIMIT = 10_000

# Largest contour mass the census enumerates.
MAX_CENSUS_MASS = 4

# Largest enumeration horizon (sites on each side of the origin).
MAX_CENSUS_HORIZON = 20_000

# Largest window (in sites) the exact partition function enumerates.
MAX_EXACT_SITES = 21

# Windows up to this size get an exact-oracle annotation in `simulate`.
MAX_ORACLE_ANNOTATION_SITES = 19

# Truncation target for the Peierls series tail.
SERIES_TOLERANCE = 1e-15

# Hard cap on the number of explicitly summed Peierls terms.
MAX_SERIES_TERMS = 2**22

# Number of batches used for batch-means standard errors.
BATCH_MEANS = 20

# Candidate exponents alpha' for the tightest Peierls bound.
ALPHA_PRIME_GRID: Tuple[float, ...] = tuple(round(0.02 * k, 2) for k in range(1, 14))

# Triangle masses used as samples when fitting the field bound constant.
FIELD_SAMPLE_MAX_MASS = 64

# Contour mass enumerated for extra field bound samples.
FIELD_SAMPLE_CENSUS_MASS = 2

# Sweeps per block of pre-drawn random numbers in the Metropolis kernel.
SWEEPS_PER_CHUNK = 64

# Columns of the simulation and scan CSV files, in output order.
SIMULATION_COLUMNS: List[str] = [
    "alpha",
    "gamma",
    "h_star",
    "beta",
    "N",
    "boundary",
    "mean_spin_origin",
    "std_error",
    "samples",
    "seed",
]

# Further parameter and measurement columns, written after the standard ones.
SIMULATION_EXTRA_COLUMNS: List[str] = [
    "j1",
    "cutoff_L",
    "sweeps",
    "burn_in",
    "measure_every",
    "mean_magnetization",
    "prob_origin_minus",
]


# --------------------------------------------------------------------------------------
# Command outputs
# --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CommandOutput:
    """
    Files written by one CLI command.
    """

    name: str  # "bounds".
    json_file: Optional[str]  # "bounds.json".
    csv_file: Optional[str]  # "bounds.csv".
    description: str  # Human-readable summary.
    emoji: str  # Emoji for pretty logging.


class CommandRegistry:
    """
    Registry of CLI commands and their output files with lookup by name.
    """

    def __init__(self):
        self._outputs_by_name: Dict[str, CommandOutput] = {}
        for output in [
            CommandOutput(
                "bounds", "bounds.json", "bounds.csv", "Certified zeta_alpha", "📐"
            ),
            CommandOutput(
                "contours", "contours.json", None, "Triangles and contours", "🔺"
            ),
            CommandOutput("census", "census.json", None, "Entropy census", "🧮"),
            CommandOutput("peierls", "peierls.json", None, "Peierls beta_c", "🌡️"),
            CommandOutput(
                "simulate", None, "simulate.csv", "Metropolis measurement", "🎲"
            ),
            CommandOutput("scan", None, "scan.csv", "Boundary gap scan", "📊"),
        ]:
            self._outputs_by_name[output.name] = output

    def get(self, name: str) -> CommandOutput:
        """
        Look up a command by name.

        :param name: Command name.
        :return: Its output definition.
        """

        if name not in self._outputs_by_name:
            raise ValueError(f"Unknown command: {name}.")
        return self._outputs_by_name[name]

    @property
    def names(self) -> List[str]:
        return sorted(self._outputs_by_name)


COMMANDS = CommandRegistry()
