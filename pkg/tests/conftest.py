"""Shared pytest setup for the qalign test suite."""
from __future__ import annotations

import logging
import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from qalign.utils.seqdb import HammingMode, HammingTable


@pytest.fixture(autouse=True)
def _reset_qalign_logger():
    """``setup_logging`` detaches the package logger from root; undo that so caplog keeps working."""

    yield
    logger = logging.getLogger("qalign")
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def make_table():
    """Build a HammingTable straight from distance values."""

    def _make(values, *, m: int = 1, bits_per_residue: int = 5, mode: HammingMode = HammingMode.BIT):
        return HammingTable(
            values=np.asarray(values, dtype=np.int64),
            mode=mode,
            m=m,
            bits_per_residue=bits_per_residue,
        )

    return _make


@pytest.fixture
def single_target(make_table):
    """Table of ``n_prime`` windows where only ``target`` has distance 0."""

    def _make(n_prime: int, target: int = 0):
        values = np.ones(n_prime, dtype=np.int64)
        values[target] = 0
        return make_table(values, m=1, bits_per_residue=1)

    return _make


@pytest.fixture
def write_fasta(tmp_path):
    """Write FASTA records (header, sequence) to a temporary file and return its path."""

    def _write(records, name: str = "db.fasta", newline: str = "\n") -> Path:
        path = tmp_path / name
        lines = []
        for header, sequence in records:
            lines.append(f">{header}")
            lines.append(sequence)
        path.write_bytes((newline.join(lines) + newline).encode("utf-8"))
        return path

    return _write
