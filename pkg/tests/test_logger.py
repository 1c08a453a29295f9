"""Tests for logging setup."""
from __future__ import annotations

import io
import logging

from qalign.services.logger import setup_logging


def test_setup_logging_writes_to_the_given_stream_only():
    stream = io.StringIO()

    logger = setup_logging(logging.INFO, stream=stream)
    logging.getLogger("qalign.align").info("Optimal alignment found: distance=%s", 1)
    logging.getLogger("qalign.align").debug("hidden")

    assert logger.name == "qalign"
    assert logger.propagate is False
    assert len(logger.handlers) == 1
    assert "qalign.align | INFO | Optimal alignment found: distance=1" in stream.getvalue()
    assert "hidden" not in stream.getvalue()


def test_debug_level_includes_thread_name():
    stream = io.StringIO()

    setup_logging(logging.DEBUG, stream=stream)
    logging.getLogger("qalign.bbht").debug("trial")

    assert "| MainThread | DEBUG | trial" in stream.getvalue()


def test_repeated_setup_does_not_duplicate_handlers():
    setup_logging(stream=io.StringIO())
    logger = setup_logging(stream=io.StringIO())
    assert len(logger.handlers) == 1
