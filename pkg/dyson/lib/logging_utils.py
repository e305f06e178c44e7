"""
Run-aware logging utilities for long-range chain computations.

This module provides logging that tags every message with the current run (command
name and seed) when code executes inside a `run_context` block, and falls back to
plain Python logging otherwise. This keeps the output of concurrent or repeated runs
attributable to the parameters that produced it.
"""

import logging
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Iterator, Optional, Union


# Fields of the run currently executing in this context, if any.
_CURRENT_RUN: ContextVar[Optional[Dict[str, Any]]] = ContextVar(
    "dyson_current_run", default=None
)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Union[int, str] = logging.INFO) -> None:
    """
    Configure the root handler once for command-line usage.

    :param level: Logging level name or number.
    """

    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


@contextmanager
def run_context(**fields: Any) -> Iterator[Dict[str, Any]]:
    """
    Mark the enclosed block as one run so that log messages carry its tag.

    Example:
        with run_context(command="bounds", seed=7):
            LOGGER.info("Certifying.")

    :param fields: Run descriptors (typically `command` and `seed`).
    :return: The run fields, for callers that want to extend them.
    """

    token = _CURRENT_RUN.set(dict(fields))
    try:
        yield _CURRENT_RUN.get()
    finally:
        _CURRENT_RUN.reset(token)


def current_run() -> Optional[Dict[str, Any]]:
    """
    Return the fields of the run executing in this context, or None.
    """

    return _CURRENT_RUN.get()


class RunAwareLogger:
    """
    Logger that prefixes messages with the active run tag when one is set.

    Detects whether code is running inside a `run_context` block and prepends a
    `[command seed=...]` tag. Falls back to the untagged standard logger otherwise.
    """

    def __init__(self, name: str):
        """
        Initialize the logger.

        :param name: Logger name (typically __name__ of the module).
        """

        self.name = name
        self._logger = logging.getLogger(name)

    def _tag(self, msg: Union[str, object]) -> Union[str, object]:
        """
        Prefix the message with the run tag for the current context.

        :param msg: Message to log.
        :return: Tagged message if in a run context, otherwise the message unchanged.
        """

        run = _CURRENT_RUN.get()
        if not run:
            return msg
        command = run.get("command", "run")
        extras = " ".join(f"{k}={v}" for k, v in sorted(run.items()) if k != "command")
        tag = f"[{command} {extras}]" if extras else f"[{command}]"
        return f"{tag} {msg}"

    def debug(self, msg: Union[str, object], *args, **kwargs) -> None:
        """
        Log a debug message.
        """

        return self._logger.debug(self._tag(msg), *args, **kwargs)

    def info(self, msg: Union[str, object], *args, **kwargs) -> None:
        """
        Log an info message.
        """

        return self._logger.info(self._tag(msg), *args, **kwargs)

    def warning(self, msg: Union[str, object], *args, **kwargs) -> None:
        """
        Log a warning message.
        """

        return self._logger.warning(self._tag(msg), *args, **kwargs)

    def error(self, msg: Union[str, object], *args, **kwargs) -> None:
        """
        Log an error message.
        """

        return self._logger.error(self._tag(msg), *args, **kwargs)

    def critical(self, msg: Union[str, object], *args, **kwargs) -> None:
        """
        Log a critical message.
        """

        return self._logger.critical(self._tag(msg), *args, **kwargs)


# Global logger instance for module-level imports.
LOGGER = RunAwareLogger("dyson")
