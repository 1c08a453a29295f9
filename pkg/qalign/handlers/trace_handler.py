"""Handler for the ``trace`` command: marked probability against the closed form, step by step."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from qalign.config import RunConfig
from qalign.handlers.output import render_rows, write_text
from qalign.services.pipeline import prepare_run
from qalign.utils import qsim
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import HammingTable

logger = logging.getLogger("qalign.trace_handler")

TRACE_HEADER = ("k", "simulated", "predicted")


@dataclass(frozen=True, slots=True)
class TraceRow:
    k: int
    simulated: float
    predicted: float


def default_max_k(n_prime: int) -> int:
    return 3 * math.ceil(math.sqrt(n_prime))


def build_trace(table: HammingTable, mark: MarkPredicate, max_k: int) -> list[TraceRow]:
    state = qsim.init_uniform(table)
    n_targets = mark.count(table)
    rows: list[TraceRow] = []
    for k in range(max_k + 1):
        if k:
            qsim.grover_step(state, mark)
        rows.append(
            TraceRow(
                k=k,
                simulated=qsim.marked_probability(state, mark),
                predicted=qsim.predicted_marked_probability(table.n_prime, n_targets, k),
            )
        )
    return rows


def cmd_trace(config: RunConfig) -> int:
    prepared = prepare_run(config)
    table = prepared.table
    mark = prepared.mark(config.distance)
    max_k = default_max_k(table.n_prime) if config.max_k is None else config.max_k

    rows = build_trace(table, mark, max_k)
    worst = max(abs(row.simulated - row.predicted) for row in rows)
    logger.info(
        "Trace written: n_prime=%s distance=%s steps=%s max_deviation=%.3e",
        table.n_prime,
        config.distance,
        max_k,
        worst,
    )
    text = render_rows(TRACE_HEADER, [(r.k, r.simulated, r.predicted) for r in rows], config.output_format)
    write_text(text, config.output_path)
    return 0
