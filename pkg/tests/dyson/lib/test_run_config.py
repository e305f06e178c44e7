"""
Unit tests for dyson.lib.run_config module.

This test suite covers:
    - Parsing of flat `key = value` files through python-dotenv, comments included.
    - Validation of simulate and scan configuration models.
    - Seed resolution order and range checks.
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from dyson.lib.run_config import (
    MAX_SEED,
    SEED_ENV_VAR,
    ScanConfigFile,
    SimConfigFile,
    load_flat_config,
    parse_flat_config,
    resolve_seed,
)


SIM_TEXT = """
# Dyson chain at alpha = 0.2.
alpha = 0.2
beta = 1.5
window_radius = 8
boundary = plus   # outside spins
sweeps = 200
burn_in = 50
"""


class TestParseFlatConfig:
    """
    Tests for parse_flat_config and load_flat_config.
    """

    def test_parses_keys_and_strips_comments(self) -> None:
        # Act.
        values = parse_flat_config(SIM_TEXT)

        # Assert.
        assert values["alpha"] == "0.2"
        assert values["boundary"] == "plus"
        assert len(values) == 6

    def test_line_without_equals_raises(self) -> None:
        with pytest.raises(ValueError, match="line 2"):
            parse_flat_config("alpha = 0.1\nbeta 2\n")

    def test_duplicate_key_raises(self) -> None:
        with pytest.raises(ValueError, match="defined twice"):
            parse_flat_config("beta = 1\nbeta = 2\n")

    def test_empty_key_raises(self) -> None:
        with pytest.raises(ValueError, match="line 1"):
            parse_flat_config("= 3\n")

    def test_key_without_value_raises(self) -> None:
        with pytest.raises(ValueError, match="no value for 'sweeps'"):
            parse_flat_config("alpha = 0.1\nsweeps\n")

    def test_quotes_stripped_and_no_expansion(self) -> None:
        # Act.
        values = parse_flat_config('boundary = "minus"\nbeta = ${BETA}\n')

        # Assert.
        assert values == {"boundary": "minus", "beta": "${BETA}"}

    def test_load_duplicate_key_raises(self, tmp_path: Path) -> None:
        path = tmp_path / "sim.cfg"
        path.write_text(SIM_TEXT + "beta = 2.5\n", encoding="utf-8")
        with pytest.raises(ValueError, match="'beta' is defined twice"):
            load_flat_config(path)

    def test_load_missing_file_raises(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            load_flat_config(tmp_path / "missing.cfg")

    def test_load_file(self, tmp_path: Path) -> None:
        path = tmp_path / "sim.cfg"
        path.write_text(SIM_TEXT, encoding="utf-8")
        assert load_flat_config(path)["sweeps"] == "200"


class TestSimConfigFile:
    """
    Tests for SimConfigFile validation.
    """

    def test_defaults_and_coercion(self) -> None:
        # Act.
        config = SimConfigFile(**parse_flat_config(SIM_TEXT))

        # Assert.
        assert config.alpha == pytest.approx(0.2)
        assert config.window_radius == 8
        assert config.j1 == 1.0
        assert config.h_star == 0.0
        assert config.measure_every == 1
        assert config.seed is None

    def test_unknown_key_rejected(self) -> None:
        values = parse_flat_config(SIM_TEXT + "temperature = 3\n")
        with pytest.raises(ValidationError):
            SimConfigFile(**values)

    @pytest.mark.parametrize(
        "key, value",
        [("alpha", "1.0"), ("beta", "-0.5"), ("boundary", "up"), ("sweeps", "0")],
    )
    def test_out_of_range_rejected(self, key: str, value: str) -> None:
        values = parse_flat_config(SIM_TEXT)
        values[key] = value
        with pytest.raises(ValidationError):
            SimConfigFile(**values)


class TestScanConfigFile:
    """
    Tests for ScanConfigFile grid parsing.
    """

    def test_lists_are_split(self) -> None:
        # Arrange.
        values = {
            "alpha": "0.1",
            "beta": "0.05, 2.0",
            "window_radius": "16,32",
            "sweeps": "100",
            "burn_in": "10",
            "n_jobs": "2",
        }

        # Act.
        config = ScanConfigFile(**values)

        # Assert.
        assert config.beta == [0.05, 2.0]
        assert config.window_radius == [16, 32]
        assert config.gamma == [1.0]
        assert config.n_jobs == 2

    def test_empty_grid_rejected(self) -> None:
        with pytest.raises(ValidationError):
            ScanConfigFile(
                alpha="0.1", beta="", window_radius="4", sweeps="10", burn_in="1"
            )


class TestResolveSeed:
    """
    Tests for resolve_seed precedence.
    """

    def test_flag_wins(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(SEED_ENV_VAR, "5")
        assert resolve_seed(7, 9) == 7

    def test_environment_before_config(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(SEED_ENV_VAR, "5")
        assert resolve_seed(None, 9) == 5

    def test_config_fallback(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        assert resolve_seed(None, 9) == 9

    def test_missing_seed_raises(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        with pytest.raises(ValueError, match="No seed"):
            resolve_seed(None, None)

    def test_bad_environment_seed(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(SEED_ENV_VAR, "seven")
        with pytest.raises(ValueError, match="not an integer"):
            resolve_seed(None)

    @pytest.mark.parametrize("seed", [-1, MAX_SEED + 1])
    def test_out_of_range(self, seed: int) -> None:
        with pytest.raises(ValueError, match="must be in"):
            resolve_seed(seed)
