"""Tests for the iterative optimal alignment and the enumeration of optimal positions."""
from __future__ import annotations

import logging

import numpy as np
import pytest

from qalign.services.align import (
    AlignParams,
    AlignStatus,
    InvalidParams,
    align_optimal,
    default_n_max,
    enumerate_optimal,
    resolve_n_max,
)
from qalign.utils.bbht import BbhtParams
from qalign.utils.seqdb import (
    PROTEIN,
    HammingMode,
    QuerySequence,
    complete_database,
    database_from_strings,
    hamming_table,
    parse_sequence,
    window,
)


def _table(db_text: str, query_text: str, mode: HammingMode = HammingMode.BIT):
    return hamming_table(database_from_strings([db_text], PROTEIN), parse_sequence(query_text, PROTEIN), mode)


def test_default_n_max_is_a_third_of_the_query():
    assert default_n_max(_table("ACDEFGHIK", "ACDE")) == 5 * 2
    assert default_n_max(_table("ACDEFGHIK", "ACDE", HammingMode.RESIDUE)) == 2
    assert default_n_max(_table("ACDEFGHIK", "ACD")) == 5


def test_found_at_level_one():
    result = align_optimal(_table("ACDA", "AD"), AlignParams(r=3, n_max=2))

    assert result.status is AlignStatus.FOUND
    assert (result.distance, result.position) == (1, 1)
    assert [level.distance for level in result.per_level_trace] == [0, 1]
    assert not result.per_level_trace[0].found
    assert result.per_level_trace[1].found


def test_exact_match_in_complete_database():
    db = complete_database(10)
    target = 300
    query = QuerySequence(window(db, target, 10).copy(), PROTEIN)
    table = hamming_table(db, query)

    result = align_optimal(table, AlignParams(r=3, master_seed=7))

    assert result.found
    assert (result.distance, result.position) == (0, target)
    assert len(result.per_level_trace) == 1


def test_n_max_zero_without_exact_match_is_exhausted():
    table = _table("AAAA", "CC")
    params = AlignParams(r=2, n_max=0)

    result = align_optimal(table, params)

    assert result.status is AlignStatus.EXHAUSTED
    assert result.position is None and result.distance is None
    assert result.oracle_calls_total == 2 * params.bbht.budget(table.n_prime)


def test_logs_the_optimal_alignment(caplog):
    caplog.set_level(logging.INFO, logger="qalign.align")
    align_optimal(_table("ACDA", "AD"), AlignParams(n_max=2))
    assert "Optimal alignment found" in caplog.text


@pytest.mark.parametrize(
    "params",
    [AlignParams(r=0), AlignParams(n_max=-1), AlignParams(n_max=11)],
)
def test_invalid_params(params):
    with pytest.raises(InvalidParams):
        align_optimal(_table("ACDA", "AC"), params)


def test_resolve_n_max_uses_the_default():
    table = _table("ACDEFG", "ACD")
    assert resolve_n_max(table, AlignParams()) == 5
    assert resolve_n_max(table, AlignParams(n_max=15)) == 15


def test_levels_are_searched_in_increasing_order_within_budget():
    rng = np.random.default_rng(8)
    params = AlignParams(r=3, master_seed=99)
    for _ in range(20):
        residues = "".join(rng.choice(list(PROTEIN.letters), size=40))
        query = "".join(rng.choice(list(PROTEIN.letters), size=3))
        table = _table(residues, query)
        n_max = table.max_distance
        result = align_optimal(table, AlignParams(r=3, n_max=n_max, master_seed=99))

        levels = [level.distance for level in result.per_level_trace]
        assert levels == list(range(len(levels)))
        budget = params.bbht.budget(table.n_prime)
        assert result.oracle_calls_total <= params.r * (n_max + 1) * budget
        assert result.oracle_calls_total == sum(level.oracle_calls for level in result.per_level_trace)


def test_same_seed_gives_identical_results():
    table = _table("ACDEFGHIKLMNPQRSTVWYACDEFGHIKL", "KLMQ")
    params = AlignParams(r=3, master_seed=5, n_max=table.max_distance)

    first = align_optimal(table, params)
    again = align_optimal(table, params)

    assert (first.status, first.position, first.distance) == (again.status, again.position, again.distance)
    assert first.per_level_trace == again.per_level_trace


def test_compressed_search_agrees_on_the_level():
    table = _table("ACDEFGHIKLMNPQRSTVWYACDEFGHIKL", "KLMQ")
    dense = align_optimal(table, AlignParams(n_max=table.max_distance, master_seed=1))
    compressed = align_optimal(
        table,
        AlignParams(n_max=table.max_distance, master_seed=1, bbht=BbhtParams(compressed=True)),
    )
    assert dense.found and compressed.found
    assert table.values[compressed.position] == compressed.distance


def test_enumerate_examples():
    assert enumerate_optimal(_table("AAAA", "AA"), 0, AlignParams(r=3)) == {0, 1, 2}
    assert enumerate_optimal(_table("ACDA", "AD"), 1, AlignParams(r=3)) == {1}
    assert enumerate_optimal(_table("AAAA", "CC"), 0, AlignParams(r=2)) == set()


def test_enumerate_keeps_known_positions():
    table = _table("AAAA", "AA")
    assert enumerate_optimal(table, 0, AlignParams(r=3), known=frozenset({0, 1, 2})) == {0, 1, 2}
    assert enumerate_optimal(table, 0, AlignParams(r=3), known=frozenset({1})) == {0, 1, 2}


def test_enumerate_respects_excluded_positions():
    table = _table("AAAA", "AA")
    assert enumerate_optimal(table, 0, AlignParams(r=3, excluded=frozenset({1}))) == {0, 2}


def test_enumerate_rejects_bad_arguments():
    table = _table("ACDA", "AC")
    with pytest.raises(InvalidParams):
        enumerate_optimal(table, 0, AlignParams(r=0))
    with pytest.raises(InvalidParams):
        enumerate_optimal(table, 11, AlignParams())


def test_positions_outside_the_table_are_invalid_params(make_table):
    table = make_table([0, 0, 1])

    with pytest.raises(InvalidParams):
        enumerate_optimal(table, 0, AlignParams(r=2), known=frozenset({7}))
    with pytest.raises(InvalidParams):
        enumerate_optimal(table, 0, AlignParams(r=2, excluded=frozenset({-1})))
    with pytest.raises(InvalidParams):
        align_optimal(table, AlignParams(r=2, n_max=1, excluded=frozenset({3})))
