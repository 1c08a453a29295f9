"""Logging utilities for the qalign tools."""
from __future__ import annotations

import logging
import sys
from logging import Logger
from typing import Optional, TextIO

_LOGGER_NAME = "qalign"
_DEFAULT_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"
_DEBUG_FORMAT = "%(asctime)s | %(name)s | %(threadName)s | %(levelname)s | %(message)s"


def setup_logging(
    level: int = logging.INFO,
    log_format: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> Logger:
    """Configure the ``qalign`` logger and return it.

    Records go to ``stream`` (stderr by default) and never to stdout, where reports
    and trace files are written. At DEBUG the worker thread name is included.
    """

    if log_format is None:
        log_format = _DEBUG_FORMAT if level <= logging.DEBUG else _DEFAULT_FORMAT
    formatter = logging.Formatter(fmt=log_format, datefmt="%Y-%m-%d %H:%M:%S")

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(formatter)

    logger = logging.getLogger(_LOGGER_NAME)
    logger.setLevel(level)
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.propagate = False

    logger.debug("Logging has been configured at level %s.", logging.getLevelName(level))
    return logger
