"""
Filesystem utilities for reproducible command outputs.

This module provides standardized output directory management and deterministic
writers for the machine-readable results of every command. It includes:
    - OutputDirectories for resolving and creating the output location.
    - JSON writing with sorted keys and numpy-aware conversion.
    - CSV writing through pandas with a fixed float format.
    - JSON reading with a clear error for missing files.
"""

import json
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from dyson.lib.logging_utils import LOGGER


# Environment variable consulted when no explicit output directory is given.
OUTPUT_DIR_ENV_VAR = "DYSON_OUTPUT_DIR"

# Fallback output directory, relative to the working directory.
DEFAULT_OUTPUT_DIR = "output"

# Float format shared by every CSV file so that reruns are byte-identical.
CSV_FLOAT_FORMAT = "%.12g"


@dataclass
class OutputDirectories:
    """
    Resolves the directory that receives the JSON and CSV files of a command.

    Resolution order: explicit argument, then the DYSON_OUTPUT_DIR environment
    variable, then ./output.
    """

    root: Optional[Path] = None

    def set_path(self, out: Optional[str] = None, create_dirs: bool = True) -> Path:
        """
        Resolve the output directory and optionally create it.

        :param out: Explicit output directory (the `--out` flag).
        :param create_dirs: Whether to create the directory if it doesn't exist.
        :return: The resolved directory.
        """

        self.root = self._resolve(out)
        if create_dirs:
            self.root.mkdir(parents=True, exist_ok=True)
            LOGGER.info(f"Ensured directory exists: {self.root}.")
        return self.root

    @staticmethod
    def _resolve(out: Optional[str]) -> Path:
        """
        Pick the output directory from the flag or the environment.

        :param out: Explicit output directory, or None.
        :return: Path object for the directory.
        """

        if out:
            return Path(out)
        return Path(os.environ.get(OUTPUT_DIR_ENV_VAR) or DEFAULT_OUTPUT_DIR)

    def file(self, name: str) -> Path:
        """
        Path of a file inside the resolved output directory.

        :param name: File name.
        :return: Full path.
        """

        if self.root is None:
            raise ValueError("Output directory not resolved; call set_path first.")
        return self.root / name


def to_builtin(value: Any) -> Any:
    """
    Convert numpy scalars, arrays, enums and paths into JSON-compatible builtins.

    :param value: Any object reached by the JSON encoder.
    :return: Builtin equivalent.
    """

    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable.")


def dumps_json(payload: Any) -> str:
    """
    Serialize a payload deterministically (sorted keys, fixed indent).

    :param payload: JSON-compatible structure, possibly holding numpy values.
    :return: JSON text ending with a newline.
    """

    return json.dumps(payload, sort_keys=True, indent=2, default=to_builtin) + "\n"


def write_json(path: Path, payload: Any) -> Path:
    """
    Write a payload as deterministic JSON.

    :param path: Destination file.
    :param payload: JSON-compatible structure.
    :return: The path written.
    """

    path = Path(path)
    path.write_text(dumps_json(payload), encoding="utf-8")
    LOGGER.info(f"📝 Wrote {path}.")
    return path


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    """
    Write a table as CSV with a fixed float format and no index.

    :param path: Destination file.
    :param frame: Table to write.
    :return: The path written.
    """

    path = Path(path)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    LOGGER.info(f"📝 Wrote {path} ({len(frame)} rows).")
    return path


def read_json(path: Path) -> Any:
    """
    Read a JSON file.

    :param path: File to read.
    :return: Parsed content.
    :raises FileNotFoundError: If the file does not exist.
    """

    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"JSON file not found: {path}.")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
