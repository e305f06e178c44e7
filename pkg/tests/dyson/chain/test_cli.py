"""
Unit tests for dyson.chain.cli module.

This test suite covers:
    - Spin parsing from inline lists, JSON text and files.
    - Every command through `main`, its output files and exit codes.
    - Seed resolution and reproducibility of the simulation commands.
"""

import json
import math
from pathlib import Path
from unittest.mock import MagicMock, patch

import pandas as pd
import pytest

from dyson.chain.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main, parse_spins
from dyson.chain.constants import Boundary
from dyson.lib.run_config import SEED_ENV_VAR


SIM_CONFIG = """
alpha = 0.3
beta = 0.4
window_radius = 3
boundary = minus
sweeps = 300
burn_in = 30
h_star = 0.2
"""

SCAN_CONFIG = """
alpha = 0.5
beta = 0.2, 1.0
window_radius = 3
sweeps = 200
burn_in = 20
"""


def write_config(tmp_path: Path, text: str, name: str = "run.cfg") -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def read_output(tmp_path: Path, name: str) -> dict:
    return json.loads((tmp_path / "out" / name).read_text(encoding="utf-8"))


class TestParseSpins:
    """
    Tests for parse_spins.
    """

    def test_inline_forms(self) -> None:
        expected = (1, -1, 1)
        assert parse_spins([1, -1, 1]).spins == expected
        assert parse_spins("[1,-1,1]").spins == expected
        assert parse_spins("+ - +").spins == expected
        assert parse_spins("+1 -1 +1", boundary="minus").boundary is Boundary.MINUS

    def test_json_text_and_file(self, tmp_path: Path) -> None:
        # Arrange.
        payload = {"N": 1, "boundary": "minus", "spins": [-1, 1, -1]}
        path = tmp_path / "sigma.json"
        path.write_text(json.dumps(payload), encoding="utf-8")

        # Act & Assert.
        assert parse_spins(json.dumps(payload)).spins == (-1, 1, -1)
        assert parse_spins(str(path)).boundary is Boundary.MINUS
        assert parse_spins(payload).window_radius == 1

    def test_invalid_values(self) -> None:
        with pytest.raises(ValueError, match="spin at index 1"):
            parse_spins("[1, 0, 1]")
        with pytest.raises(ValueError):
            parse_spins("[1, 1]")

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            parse_spins(str(tmp_path / "missing.json"))


class TestCommands:
    """
    Tests for the bounds, contours, census and peierls commands.
    """

    def test_bounds(self, tmp_path: Path) -> None:
        # Act.
        args = ["bounds", "--alpha", "0.1", "--limit", "300"]
        code = main(args + ["--out", f"{tmp_path}/out"])

        # Assert.
        assert code == EXIT_OK
        record = read_output(tmp_path, "bounds.json")
        assert record["parameters"] == {"alpha": 0.1, "limit": 300}
        assert record["reports"][0]["certified"] is True
        table = pd.read_csv(tmp_path / "out" / "bounds.csv")
        assert list(table.columns) == ["L", "W_alpha", "zeta_chi", "margin"]
        assert len(table) == 300
        assert (table["margin"] >= -1e-9).all()

    def test_bounds_alpha_out_of_range(self, tmp_path: Path) -> None:
        code = main(["bounds", "--alpha", "0.4", "--out", str(tmp_path)])
        assert code == EXIT_USAGE
        assert not (tmp_path / "bounds.json").exists()

    def test_contours(self, tmp_path: Path) -> None:
        # Act.
        code = main(["contours", "--spins", "[1,1,-1,1,1]", "--out", f"{tmp_path}/out"])

        # Assert.
        assert code == EXIT_OK
        record = read_output(tmp_path, "contours.json")
        assert record["parameters"]["N"] == 2
        assert len(record["triangles"]) == 1
        assert record["separated"] is True
        assert record["compatible"] is True
        assert record["violations"] == []

    def test_contours_even_length(self, tmp_path: Path) -> None:
        assert main(["contours", "--spins", "[1,-1]", "--out", str(tmp_path)]) == 2

    def test_census(self, tmp_path: Path) -> None:
        # Act.
        code = main(["census", "--m", "2", "--b", "5", "--out", f"{tmp_path}/out"])

        # Assert.
        assert code == EXIT_OK
        record = read_output(tmp_path, "census.json")
        assert record["pass"] is True
        assert record["contour_count"] == 6
        assert record["parameters"]["m"] == 2

    def test_census_refused(self, tmp_path: Path) -> None:
        assert main(["census", "--m", "9", "--out", str(tmp_path)]) == EXIT_USAGE

    def test_peierls(self, tmp_path: Path) -> None:
        # Act.
        code = main(["peierls", "--alpha", "0.5", "--out", f"{tmp_path}/out"])

        # Assert.
        assert code == EXIT_OK
        record = read_output(tmp_path, "peierls.json")
        assert record["regime"] == "zero-field"
        assert math.isfinite(record["beta_c"])
        assert record["parameters"]["kc_variant"] == "corrected"

    def test_peierls_field_above_threshold(self, tmp_path: Path) -> None:
        # Act.
        code = main(
            [
                "peierls",
                "--alpha",
                "0.2",
                "--gamma",
                "0.8",
                "--hstar",
                "1e6",
                "--out",
                f"{tmp_path}/out",
            ]
        )

        # Assert.
        assert code == EXIT_VIOLATION
        assert read_output(tmp_path, "peierls.json")["beta_c"] == math.inf

    @patch("dyson.chain.cli.LOGGER")
    def test_peierls_decay_hypothesis(
        self, mock_logger: MagicMock, tmp_path: Path
    ) -> None:
        args = ["peierls", "--alpha", "0.5", "--gamma", "0.4", "--hstar", "1"]
        assert main(args + ["--out", str(tmp_path)]) == EXIT_USAGE
        assert "gamma <= 1-alpha" in mock_logger.error.call_args.args[0]

    @patch("dyson.chain.cli.LOGGER")
    def test_peierls_gamma_without_field(
        self, mock_logger: MagicMock, tmp_path: Path
    ) -> None:
        args = ["peierls", "--alpha", "0.5", "--gamma", "0.3"]
        assert main(args + ["--out", str(tmp_path)]) == EXIT_USAGE
        assert "gamma <= 1-alpha" in mock_logger.error.call_args.args[0]
        assert not (tmp_path / "peierls.json").exists()

    def test_peierls_alpha_zero_fast_decay(self, tmp_path: Path) -> None:
        # Act.
        args = ["peierls", "--alpha", "0", "--gamma", "1.5", "--hstar", "0.001"]
        code = main(args + ["--out", f"{tmp_path}/out"])

        # Assert.
        assert code == EXIT_OK
        record = read_output(tmp_path, "peierls.json")
        assert record["regime"] == "critical"
        assert record["parameters"]["gamma"] == 1.5

    @patch("dyson.chain.cli.beta_c_bound")
    def test_arithmetic_errors_are_usage_errors(
        self, mock_bound: MagicMock, tmp_path: Path
    ) -> None:
        mock_bound.side_effect = ZeroDivisionError("float division by zero")
        code = main(["peierls", "--alpha", "0.5", "--out", str(tmp_path)])
        assert code == EXIT_USAGE

    def test_unknown_command(self) -> None:
        assert main(["nonsense"]) == EXIT_USAGE


class TestSimulationCommands:
    """
    Tests for simulate and scan.
    """

    def test_simulate_is_reproducible(self, tmp_path: Path) -> None:
        # Arrange.
        config = write_config(tmp_path, SIM_CONFIG)

        # Act.
        args = ["simulate", "--config", config, "--seed", "7"]
        first = main(args + ["--out", f"{tmp_path}/a"])
        second = main(args + ["--out", f"{tmp_path}/b"])

        # Assert.
        assert first == second == EXIT_OK
        text_a = (tmp_path / "a" / "simulate.csv").read_text(encoding="utf-8")
        text_b = (tmp_path / "b" / "simulate.csv").read_text(encoding="utf-8")
        assert text_a == text_b

    def test_simulate_oracle_columns(self, tmp_path: Path) -> None:
        # Act.
        config = write_config(tmp_path, SIM_CONFIG)
        main(["simulate", "--config", config, "--seed", "3", "--out", str(tmp_path)])

        # Assert.
        frame = pd.read_csv(tmp_path / "simulate.csv")
        assert len(frame) == 1
        assert frame["seed"].iloc[0] == 3
        assert frame["boundary"].iloc[0] == "minus"
        assert 0.0 <= frame["exact_prob_origin_minus"].iloc[0] <= 1.0
        assert "z_score" in frame.columns

    def test_seed_from_config_file(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        # Arrange.
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        config = write_config(tmp_path, SIM_CONFIG + "seed = 11\n")

        # Act.
        code = main(["simulate", "--config", config, "--out", str(tmp_path)])

        # Assert.
        assert code == EXIT_OK
        assert pd.read_csv(tmp_path / "simulate.csv")["seed"].iloc[0] == 11

    def test_seed_required(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        config = write_config(tmp_path, SIM_CONFIG)
        assert main(["simulate", "--config", config, "--out", str(tmp_path)]) == 2

    def test_missing_key(self, tmp_path: Path) -> None:
        config = write_config(tmp_path, SIM_CONFIG.replace("sweeps = 300", ""))
        code = main(["simulate", "--config", config, "--out", str(tmp_path)])
        assert code == EXIT_USAGE
        assert not (tmp_path / "simulate.csv").exists()

    def test_missing_config_file(self, tmp_path: Path) -> None:
        config = str(tmp_path / "absent.cfg")
        assert main(["simulate", "--config", config, "--out", str(tmp_path)]) == 2

    def test_scan(self, tmp_path: Path) -> None:
        # Act.
        config = write_config(tmp_path, SCAN_CONFIG)
        code = main(["scan", "--config", config, "--seed", "5", "--out", str(tmp_path)])

        # Assert.
        assert code == EXIT_OK
        frame = pd.read_csv(tmp_path / "scan.csv")
        assert len(frame) == 4
        assert sorted(frame["boundary"].unique()) == ["minus", "plus"]
        assert "gap" in frame.columns
        args = ["scan", "--config", config, "--seed", "5", "--n_jobs", "2"]
        assert main(args + ["--out", f"{tmp_path}/p"]) == EXIT_OK
        pd.testing.assert_frame_equal(frame, pd.read_csv(tmp_path / "p" / "scan.csv"))
