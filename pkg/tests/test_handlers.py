"""Tests for the command handlers below the argument parser."""
from __future__ import annotations

import json

import numpy as np
import pytest

from qalign.config import OutputFormat
from qalign.handlers.output import format_value, render_mapping, render_rows
from qalign.handlers.search_handler import SoundnessError, run_exact, verify_position
from qalign.handlers.stats_handler import TrialResult, run_bbht_stats, summarize
from qalign.handlers.trace_handler import build_trace, default_max_k
from qalign.services.pipeline import PreparedSearch
from qalign.utils.bbht import BbhtParams
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import PROTEIN, QuerySequence, complete_database, hamming_table, window


def _planted(m: int, position: int) -> PreparedSearch:
    db = complete_database(m)
    query = QuerySequence(window(db, position, m).copy(), PROTEIN)
    return PreparedSearch(database=db, query=query, table=hamming_table(db, query), excluded=frozenset())


def test_exact_search_on_complete_database():
    prepared = _planted(4, 6)

    reports = [run_exact(prepared, seed) for seed in range(100)]

    assert {report.k_max for report in reports} == {3}
    assert all(report.oracle_calls == 3 for report in reports)
    assert reports[0].predicted_success >= 0.95
    verified = [report for report in reports if report.verified]
    assert all(report.position == 6 and report.distance == 0 for report in verified)
    assert len(verified) >= 95


def test_exact_search_on_a_single_window():
    db = complete_database(2)
    query = QuerySequence(db.residues.copy(), PROTEIN)
    prepared = PreparedSearch(db, query, hamming_table(db, query), frozenset())

    report = run_exact(prepared, seed=0)

    assert (report.position, report.k_max, report.predicted_success, report.verified) == (0, 0, 1.0, True)


def test_verify_position_is_the_soundness_gate(make_table):
    table = make_table([2, 1, 2])
    verify_position(table, 1, 1)
    with pytest.raises(SoundnessError):
        verify_position(table, 0, 1)


def test_trace_matches_multi_target_closed_form(make_table):
    values = np.ones(64, dtype=np.int64)
    values[[3, 17, 40, 63]] = 0
    table = make_table(values, bits_per_residue=1)

    rows = build_trace(table, MarkPredicate(0), default_max_k(64))

    assert len(rows) == 3 * 8 + 1
    assert rows[0].simulated == pytest.approx(4 / 64)
    for row in rows:
        assert abs(row.simulated - row.predicted) <= 1e-10


def test_trace_shows_overshoot(single_target):
    rows = build_trace(single_target(256), MarkPredicate(0), 48)
    peak = max(range(len(rows) // 2 + 1), key=lambda k: rows[k].simulated)
    assert rows[peak].simulated >= 0.99
    assert rows[2 * peak].simulated < rows[peak].simulated - 0.5


def test_bbht_stats_reference_curves(single_target):
    summary = run_bbht_stats(single_target(64), MarkPredicate(0), BbhtParams(), trials=50, master_seed=3, workers=3)

    assert summary["trials"] == 50
    assert summary["n_targets"] == 1
    assert summary["budget_per_run"] == 32
    assert summary["reference_expected_bound"] == pytest.approx(4.5 * 8)
    assert summary["median_oracle_calls"] <= summary["p95_oracle_calls"] <= 32


def test_bbht_stats_do_not_depend_on_worker_count(single_target):
    table = single_target(100, target=50)
    one = run_bbht_stats(table, MarkPredicate(0), BbhtParams(), trials=30, master_seed=8, workers=1)
    many = run_bbht_stats(table, MarkPredicate(0), BbhtParams(), trials=30, master_seed=8, workers=4)
    assert one == many


def test_bbht_stats_without_targets_skip_reference_curves(make_table):
    summary = run_bbht_stats(make_table([1] * 16), MarkPredicate(0), BbhtParams(), trials=4, master_seed=0)

    assert summary["success_rate"] == 0.0
    assert summary["mean_oracle_calls"] == 16.0
    assert "reference_expected_bound" not in summary


def test_summarize():
    summary = summarize([TrialResult(True, 2), TrialResult(False, 10), TrialResult(True, 6)])
    assert summary["success_rate"] == pytest.approx(2 / 3)
    assert summary["mean_oracle_calls"] == 6.0
    assert summary["median_oracle_calls"] == 6.0


def test_output_rendering():
    assert format_value(True) == "yes"
    assert format_value(None) == "-"
    assert format_value(0.1) == "0.1"

    csv_text = render_rows(("k", "simulated"), [(0, 0.25), (1, 1.0)], OutputFormat.CSV)
    assert csv_text == "k,simulated\n0,0.25\n1,1.0\n"

    assert json.loads(render_mapping({"trials": 3}, OutputFormat.JSON)) == {"trials": 3}
    assert render_mapping({"trials": 3}, OutputFormat.CSV) == "metric,value\ntrials,3\n"
