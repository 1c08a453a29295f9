"""Handler for the ``stats`` command: seeded Monte-Carlo runs summarized against reference costs."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Any

import numpy as np

from qalign.config import RunConfig
from qalign.handlers.output import print_report, render_mapping, write_text
from qalign.handlers.search_handler import align_params_from_config
from qalign.services.align import AlignParams, align_optimal, resolve_n_max
from qalign.services.pipeline import prepare_run
from qalign.utils.bbht import BbhtParams, bbht_search, derive_seed
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import HammingTable
from qalign.utils.workers import run_parallel

logger = logging.getLogger("qalign.stats_handler")

_TRIAL_STREAM = 2


@dataclass(frozen=True, slots=True)
class TrialResult:
    success: bool
    oracle_calls: int


def bbht_trial(table: HammingTable, mark: MarkPredicate, params: BbhtParams) -> TrialResult:
    outcome = bbht_search(table, mark, params)
    return TrialResult(outcome.success, outcome.oracle_calls)


def align_trial(table: HammingTable, params: AlignParams) -> TrialResult:
    result = align_optimal(table, params)
    return TrialResult(result.found, result.oracle_calls_total)


def summarize(results: list[TrialResult]) -> dict[str, Any]:
    calls = np.asarray([r.oracle_calls for r in results], dtype=np.float64)
    return {
        "trials": len(results),
        "success_rate": sum(r.success for r in results) / len(results),
        "mean_oracle_calls": float(calls.mean()),
        "median_oracle_calls": float(np.median(calls)),
        "p95_oracle_calls": float(np.percentile(calls, 95)),
    }


def run_bbht_stats(
    table: HammingTable,
    mark: MarkPredicate,
    params: BbhtParams,
    *,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> dict[str, Any]:
    """Independent BBHT runs with per-trial derived seeds plus reference cost curves."""

    jobs = [
        partial(bbht_trial, table, mark, params.with_seed(derive_seed(master_seed, _TRIAL_STREAM, index)))
        for index in range(trials)
    ]
    summary = summarize(run_parallel(jobs, workers))

    n_prime = table.n_prime
    n_targets = mark.count(table)
    summary["n_prime"] = n_prime
    summary["n_targets"] = n_targets
    summary["budget_per_run"] = params.budget(n_prime)
    if n_targets:
        ratio = math.sqrt(n_prime / n_targets)
        summary["reference_half_probability_steps"] = math.sin(math.pi / 8) * ratio
        summary["reference_expected_bound"] = 4.5 * ratio
    return summary


def run_align_stats(
    table: HammingTable,
    params: AlignParams,
    *,
    trials: int,
    workers: int = 1,
) -> dict[str, Any]:
    n_max = resolve_n_max(table, params)
    jobs = [
        partial(
            align_trial,
            table,
            AlignParams(
                r=params.r,
                n_max=n_max,
                bbht=params.bbht,
                master_seed=derive_seed(params.master_seed, _TRIAL_STREAM, index),
                excluded=params.excluded,
            ),
        )
        for index in range(trials)
    ]
    summary = summarize(run_parallel(jobs, workers))
    budget = params.bbht.budget(table.n_prime)
    summary["n_prime"] = table.n_prime
    summary["n_max"] = n_max
    summary["budget_per_run"] = budget
    summary["reference_cost_bound"] = params.r * (n_max + 1) * budget
    return summary


def cmd_stats(config: RunConfig) -> int:
    prepared = prepare_run(config)
    table = prepared.table
    params = align_params_from_config(config, prepared.excluded)

    if config.stats_mode == "align":
        summary = run_align_stats(table, params, trials=config.trials, workers=config.workers)
    else:
        summary = run_bbht_stats(
            table,
            prepared.mark(config.distance),
            params.bbht,
            trials=config.trials,
            master_seed=config.seed,
            workers=config.workers,
        )
    summary = {"mode": config.stats_mode, "seed": config.seed, **summary}

    logger.info(
        "Stats finished: mode=%s trials=%s success_rate=%.3f",
        config.stats_mode,
        config.trials,
        summary["success_rate"],
    )
    print_report("Monte-Carlo summary", summary)
    if config.output_path is not None:
        write_text(render_mapping(summary, config.output_format), config.output_path)
    return 0
