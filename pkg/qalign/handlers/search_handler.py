"""Handlers for the ``exact`` and ``align`` commands."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from qalign.config import RunConfig
from qalign.handlers.output import print_report, render_mapping, render_rows, write_text
from qalign.services.align import AlignmentResult, AlignParams, align_optimal, enumerate_optimal
from qalign.services.pipeline import PreparedSearch, prepare_run
from qalign.utils import qsim
from qalign.utils.bbht import BbhtParams, make_rng
from qalign.utils.seqdb import HammingTable

logger = logging.getLogger("qalign.search_handler")

EXIT_SUCCESS = 0
EXIT_SEARCH_FAILED = 1


class SoundnessError(AssertionError):
    """A reported position does not have the reported distance."""


def verify_position(table: HammingTable, position: int, distance: int) -> None:
    """Classical check applied to every position before it is reported."""

    actual = int(table.values[position])
    if actual != distance:
        raise SoundnessError(f"T[{position}]={actual}, expected {distance}")


@dataclass(frozen=True, slots=True)
class ExactReport:
    position: int
    distance: int
    verified: bool
    k_max: int
    predicted_success: float
    oracle_calls: int


def run_exact(prepared: PreparedSearch, seed: int, *, compressed: bool = False) -> ExactReport:
    """Fixed-iteration Grover search for a zero-distance window followed by one measurement."""

    table = prepared.table
    mark = prepared.mark(0)
    n_prime = table.n_prime
    if n_prime >= 2:
        k = qsim.grover_prediction(n_prime).k_max
        predicted = qsim.predicted_amplitude(n_prime, k) ** 2
    else:
        k, predicted = 0, 1.0

    rng = make_rng(seed)
    if compressed:
        state = qsim.evolve_compressed(qsim.init_compressed(table, mark), mark, k)
        position, calls = qsim.measure_compressed(state, rng), state.oracle_calls
    else:
        dense = qsim.evolve(qsim.init_uniform(table), mark, k)
        position, calls = qsim.measure(dense, rng), dense.oracle_calls

    return ExactReport(
        position=position,
        distance=int(table.values[position]),
        verified=mark.holds(table, position),
        k_max=k,
        predicted_success=predicted,
        oracle_calls=calls,
    )


def cmd_exact(config: RunConfig) -> int:
    prepared = prepare_run(config)
    report = run_exact(prepared, config.seed, compressed=config.compressed)
    if report.verified:
        verify_position(prepared.table, report.position, 0)
        logger.info("Exact match verified at position %s", report.position)
    else:
        logger.warning(
            "Measured position %s has distance %s; rerun with another seed",
            report.position,
            report.distance,
        )

    fields = {
        "status": "found" if report.verified else "not-found",
        "position": report.position,
        "distance": report.distance,
        "verified": report.verified,
        "k_max": report.k_max,
        "predicted_success": report.predicted_success,
        "oracle_calls": report.oracle_calls,
        "n_prime": prepared.table.n_prime,
        "q1": prepared.table.q1,
        "q2": prepared.table.q2,
        "seed": config.seed,
    }
    print_report("Exact search", fields)
    if config.output_path is not None:
        write_text(render_mapping(fields, config.output_format), config.output_path)
    return EXIT_SUCCESS if report.verified else EXIT_SEARCH_FAILED


def align_params_from_config(config: RunConfig, excluded: frozenset[int]) -> AlignParams:
    return AlignParams(
        r=config.r,
        n_max=config.n_max,
        bbht=BbhtParams(
            growth_factor=config.growth_factor,
            timeout_factor=config.timeout_factor,
            compressed=config.compressed,
        ),
        master_seed=config.seed,
        excluded=excluded,
    )


def _trace_rows(result: AlignmentResult) -> list[tuple[int, int, int, bool]]:
    return [
        (level.distance, level.repeats_used, level.oracle_calls, level.found)
        for level in result.per_level_trace
    ]


def cmd_align(config: RunConfig) -> int:
    prepared = prepare_run(config)
    table = prepared.table
    params = align_params_from_config(config, prepared.excluded)
    result = align_optimal(table, params)

    positions: list[int] = []
    if result.found and result.position is not None and result.distance is not None:
        verify_position(table, result.position, result.distance)
        positions = [result.position]
        if config.enumerate_all:
            collected = enumerate_optimal(table, result.distance, params, known=frozenset(positions))
            for position in sorted(collected):
                verify_position(table, position, result.distance)
            positions = sorted(collected)

    fields = {
        "status": result.status.value,
        "position": result.position,
        "distance": result.distance,
        "positions": " ".join(str(p) for p in positions) or None,
        "oracle_calls_total": result.oracle_calls_total,
        "levels_searched": len(result.per_level_trace),
        "n_prime": table.n_prime,
        "seed": config.seed,
    }
    print_report("Optimal alignment", fields)
    print("  level trace (distance, repeats, oracle_calls, found):")
    for distance, repeats, calls, found in _trace_rows(result):
        print(f"    {distance:>4} {repeats:>3} {calls:>8} {'yes' if found else 'no'}")

    if config.output_path is not None:
        header = ("distance", "repeats_used", "oracle_calls", "found")
        write_text(render_rows(header, _trace_rows(result), config.output_format), config.output_path)
    return EXIT_SUCCESS if result.found else EXIT_SEARCH_FAILED
