"""
Unit tests for dyson.lib.logging_utils module.
"""

import logging
from unittest.mock import patch

import pytest

from dyson.lib.logging_utils import (
    LOGGER,
    RunAwareLogger,
    configure_logging,
    current_run,
    run_context,
)


class TestRunContext:
    """
    Tests for run_context and current_run.
    """

    def test_nested_contexts_restore(self) -> None:
        assert current_run() is None
        with run_context(command="bounds"):
            with run_context(command="scan", seed=3) as run:
                assert run == {"command": "scan", "seed": 3}
            assert current_run() == {"command": "bounds"}
        assert current_run() is None

    def test_reset_on_error(self) -> None:
        with pytest.raises(RuntimeError):
            with run_context(command="census"):
                raise RuntimeError("boom")
        assert current_run() is None


class TestRunAwareLogger:
    """
    Tests for message tagging.
    """

    def test_untagged_outside_run(self, caplog: pytest.LogCaptureFixture) -> None:
        logger = RunAwareLogger("dyson.test")
        with caplog.at_level(logging.INFO, logger="dyson.test"):
            logger.info("plain")
        assert caplog.messages == ["plain"]

    def test_tagged_inside_run(self, caplog: pytest.LogCaptureFixture) -> None:
        # Arrange.
        logger = RunAwareLogger("dyson.test")

        # Act.
        with caplog.at_level(logging.DEBUG, logger="dyson.test"):
            with run_context(command="simulate", seed=11):
                logger.warning("hot")
                logger.debug("detail")

        # Assert.
        assert caplog.messages == [
            "[simulate seed=11] hot",
            "[simulate seed=11] detail",
        ]

    @patch("dyson.lib.logging_utils.logging.basicConfig")
    def test_configure_logging_accepts_names(self, mock_basic) -> None:
        configure_logging("debug")
        assert mock_basic.call_args.kwargs["level"] == logging.DEBUG

    def test_global_logger_name(self) -> None:
        assert LOGGER.name == "dyson"
