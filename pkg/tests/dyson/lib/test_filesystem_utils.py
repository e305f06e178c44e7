"""
Unit tests for dyson.lib.filesystem_utils module.

This test suite covers:
    - Output directory resolution from the flag, the environment and the default.
    - Deterministic JSON output with numpy values and enums.
    - CSV output format and JSON reading errors.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from dyson.chain.constants import Boundary
from dyson.lib.filesystem_utils import (
    DEFAULT_OUTPUT_DIR,
    OUTPUT_DIR_ENV_VAR,
    OutputDirectories,
    dumps_json,
    read_json,
    to_builtin,
    write_csv,
    write_json,
)


class TestOutputDirectories:
    """
    Tests for OutputDirectories.
    """

    def test_explicit_path_created(self, tmp_path: Path) -> None:
        # Arrange.
        target = tmp_path / "nested" / "out"
        directories = OutputDirectories()

        # Act.
        root = directories.set_path(str(target))

        # Assert.
        assert root == target
        assert target.is_dir()
        assert directories.file("bounds.json") == target / "bounds.json"

    def test_environment_fallback(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setenv(OUTPUT_DIR_ENV_VAR, str(tmp_path / "env"))
        root = OutputDirectories().set_path(None, create_dirs=False)
        assert root == tmp_path / "env"
        assert not root.exists()

    def test_default(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv(OUTPUT_DIR_ENV_VAR, raising=False)
        root = OutputDirectories().set_path(None, create_dirs=False)
        assert root == Path(DEFAULT_OUTPUT_DIR)

    def test_file_before_resolution_raises(self) -> None:
        with pytest.raises(ValueError, match="set_path"):
            OutputDirectories().file("x.json")


class TestJson:
    """
    Tests for the JSON helpers.
    """

    def test_to_builtin(self) -> None:
        assert to_builtin(np.int64(3)) == 3
        assert isinstance(to_builtin(np.float32(0.5)), float)
        assert to_builtin(np.bool_(True)) is True
        assert to_builtin(np.arange(3)) == [0, 1, 2]
        assert to_builtin(Boundary.MINUS) == "minus"
        assert to_builtin(frozenset({2, 1})) == [1, 2]

    def test_unknown_type_raises(self) -> None:
        with pytest.raises(TypeError):
            to_builtin(object())

    def test_keys_sorted(self) -> None:
        text = dumps_json({"b": 1, "a": np.float64(2.5)})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_write_and_read(self, tmp_path: Path) -> None:
        # Arrange.
        payload = {"values": np.array([1.0, 2.0]), "boundary": Boundary.PLUS}

        # Act.
        path = write_json(tmp_path / "out.json", payload)

        # Assert.
        assert read_json(path) == {"values": [1.0, 2.0], "boundary": "plus"}

    def test_write_is_deterministic(self, tmp_path: Path) -> None:
        payload = {"z": [1, 2], "a": {"y": 1.5, "x": None}}
        first = write_json(tmp_path / "1.json", payload).read_bytes()
        second = write_json(tmp_path / "2.json", dict(reversed(payload.items())))
        assert first == second.read_bytes()

    def test_read_missing_raises(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError, match="not found"):
            read_json(tmp_path / "missing.json")

    def test_infinite_values_written(self, tmp_path: Path) -> None:
        path = write_json(tmp_path / "inf.json", {"beta_c": float("inf")})
        assert json.loads(path.read_text()) == {"beta_c": float("inf")}


class TestCsv:
    """
    Tests for write_csv.
    """

    def test_format(self, tmp_path: Path) -> None:
        # Arrange.
        frame = pd.DataFrame({"L": [1, 2], "W_alpha": [1.0 / 3.0, 2.0]})

        # Act.
        path = write_csv(tmp_path / "table.csv", frame)

        # Assert.
        lines = path.read_text().splitlines()
        assert lines == ["L,W_alpha", "1,0.333333333333", "2,2"]
