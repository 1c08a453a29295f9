"""Iterative optimal alignment: search Hamming levels 0, 1, 2, ... with BBHT repeats."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

from qalign.utils.bbht import BbhtParams, bbht_search, derive_seed
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import HammingMode, HammingTable

logger = logging.getLogger("qalign.align")

_LEVEL_STREAM = 0
_ENUMERATE_STREAM = 1


class InvalidParams(ValueError):
    """Alignment parameters are inconsistent with the table."""


class AlignStatus(str, enum.Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted_n_max"


@dataclass(frozen=True, slots=True)
class AlignParams:
    r: int = 3
    n_max: int | None = None
    bbht: BbhtParams = field(default_factory=BbhtParams)
    master_seed: int = 0
    excluded: frozenset[int] = frozenset()


@dataclass(frozen=True, slots=True)
class LevelTrace:
    distance: int
    repeats_used: int
    oracle_calls: int
    found: bool


@dataclass(slots=True)
class AlignmentResult:
    status: AlignStatus
    position: int | None = None
    distance: int | None = None
    oracle_calls_total: int = 0
    per_level_trace: list[LevelTrace] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status is AlignStatus.FOUND


def default_n_max(table: HammingTable) -> int:
    """Roughly one third of the residues mismatching."""

    third = math.ceil(table.m / 3)
    return table.bits_per_residue * third if table.mode is HammingMode.BIT else third


def _check_positions(table: HammingTable, positions: frozenset[int]) -> None:
    outside = sorted(p for p in positions if not 0 <= p < table.n_prime)
    if outside:
        raise InvalidParams(f"Positions {outside} outside [0, {table.n_prime}) for this table")


def resolve_n_max(table: HammingTable, params: AlignParams) -> int:
    if params.r < 1:
        raise InvalidParams(f"Repeat index r must be at least 1, got {params.r}")
    if table.n_prime == 0:
        raise InvalidParams("Hamming table is empty.")
    _check_positions(table, params.excluded)
    n_max = default_n_max(table) if params.n_max is None else params.n_max
    if not 0 <= n_max <= table.max_distance:
        raise InvalidParams(f"n_max={n_max} outside [0, {table.max_distance}] for this table")
    return n_max


def align_optimal(table: HammingTable, params: AlignParams) -> AlignmentResult:
    """Search distance levels in increasing order; the first verified hit is returned."""

    n_max = resolve_n_max(table, params)
    result = AlignmentResult(status=AlignStatus.EXHAUSTED)

    for distance in range(n_max + 1):
        mark = MarkPredicate(distance, params.excluded)
        level_calls = 0
        for repeat in range(params.r):
            seed = derive_seed(params.master_seed, _LEVEL_STREAM, distance, repeat)
            outcome = bbht_search(table, mark, params.bbht.with_seed(seed))
            level_calls += outcome.oracle_calls
            if outcome.found is not None:
                position, value = outcome.found
                if value != distance:  # pragma: no cover - bbht verifies every hit
                    raise AssertionError(f"T[{position}]={value} does not match level {distance}")
                result.per_level_trace.append(LevelTrace(distance, repeat + 1, level_calls, True))
                result.oracle_calls_total += level_calls
                result.status = AlignStatus.FOUND
                result.position = position
                result.distance = distance
                logger.info(
                    "Optimal alignment found: distance=%s position=%s oracle_calls=%s",
                    distance,
                    position,
                    result.oracle_calls_total,
                )
                return result

        result.per_level_trace.append(LevelTrace(distance, params.r, level_calls, False))
        result.oracle_calls_total += level_calls
        logger.info("No window at distance %s after %s repeats", distance, params.r)

    logger.warning("Alignment exhausted n_max=%s without a verified match", n_max)
    return result


def enumerate_optimal(
    table: HammingTable,
    k: int,
    params: AlignParams,
    known: frozenset[int] = frozenset(),
) -> set[int]:
    """Collect positions at distance ``k`` until ``r`` consecutive BBHT runs come back empty."""

    if params.r < 1:
        raise InvalidParams(f"Repeat index r must be at least 1, got {params.r}")
    if not 0 <= k <= table.max_distance:
        raise InvalidParams(f"Distance {k} outside [0, {table.max_distance}] for this table")
    _check_positions(table, params.excluded | known)

    base = MarkPredicate(k, params.excluded)
    collected = set(known)
    failures = 0
    attempt = 0
    while failures < params.r:
        mark = base.excluding(collected)
        seed = derive_seed(params.master_seed, _ENUMERATE_STREAM, k, attempt)
        outcome = bbht_search(table, mark, params.bbht.with_seed(seed))
        attempt += 1
        if outcome.found is None:
            failures += 1
            continue
        collected.add(outcome.found[0])
        failures = 0

    logger.info("Enumerated %s positions at distance %s in %s runs", len(collected), k, attempt)
    return collected
