"""Classical brute-force baseline every simulated search result is checked against."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qalign.utils.seqdb import (
    AlphabetMismatch,
    HammingMode,
    HammingTable,
    QueryLongerThanDatabase,
    QuerySequence,
    SequenceDatabase,
)


@dataclass(frozen=True, slots=True)
class BruteResult:
    min_distance: int
    positions: list[int]
    full_table: HammingTable | None = None


def naive_distance(window: list[int], query: list[int], mode: HammingMode) -> int:
    """Distance between two equal-length code lists, one residue at a time."""

    total = 0
    for left, right in zip(window, query):
        if mode is HammingMode.BIT:
            total += bin(left ^ right).count("1")
        elif left != right:
            total += 1
    return total


def brute_min_distance(
    db: SequenceDatabase,
    query: QuerySequence,
    mode: HammingMode | str = HammingMode.BIT,
    *,
    excluded: frozenset[int] = frozenset(),
) -> BruteResult:
    """Linear scan over every window; returns the minimum distance and all positions attaining it."""

    mode = HammingMode(mode)
    if db.alphabet != query.alphabet:
        raise AlphabetMismatch("Database and query alphabets differ.")
    residues = [int(code) for code in db.residues]
    sample = [int(code) for code in query.residues]
    m = len(sample)
    if m > len(residues):
        raise QueryLongerThanDatabase(f"Query length {m} exceeds database size {len(residues)}")

    values = [naive_distance(residues[i : i + m], sample, mode) for i in range(len(residues) - m + 1)]
    candidates = [i for i in range(len(values)) if i not in excluded]
    best = min(values[i] for i in candidates) if candidates else -1
    table = HammingTable(
        values=np.asarray(values, dtype=np.int64),
        mode=mode,
        m=m,
        bits_per_residue=db.alphabet.bits_per_residue,
    )
    return BruteResult(
        min_distance=best,
        positions=[i for i in candidates if values[i] == best],
        full_table=table,
    )
