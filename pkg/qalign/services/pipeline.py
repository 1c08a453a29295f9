"""Ingestion pipeline: FASTA database and query → Hamming table and mark predicates."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from qalign.config import RunConfig
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import (
    Alphabet,
    HammingMode,
    HammingTable,
    QuerySequence,
    SequenceDatabase,
    SequenceError,
    crossing_windows,
    get_alphabet,
    hamming_table,
    load_fasta,
    parse_sequence,
)

logger = logging.getLogger("qalign.pipeline")


class SearchPipelineError(RuntimeError):
    """Base exception for search pipeline failures."""


class InputError(SearchPipelineError):
    """Database or query input could not be read or parsed."""


class ComparisonError(SearchPipelineError):
    """Database and query cannot be compared."""


@dataclass(frozen=True, slots=True)
class PreparedSearch:
    """Everything a search command needs, computed once."""

    database: SequenceDatabase
    query: QuerySequence
    table: HammingTable
    excluded: frozenset[int]

    def mark(self, distance: int) -> MarkPredicate:
        return MarkPredicate(distance, self.excluded)


class SearchPipeline:
    """Load inputs and build the Hamming table, mapping low-level failures to pipeline errors."""

    def __init__(
        self,
        alphabet: Alphabet,
        mode: HammingMode,
        *,
        allow_domain_crossing: bool = True,
    ) -> None:
        self.alphabet = alphabet
        self.mode = mode
        self.allow_domain_crossing = allow_domain_crossing

    def load_database(self, path: Path, role: str = "Database") -> SequenceDatabase:
        try:
            return load_fasta(path, self.alphabet)
        except FileNotFoundError as exc:
            logger.error("%s file does not exist: %s", role, path)
            raise InputError(f"{role} file does not exist: {path}") from exc
        except (OSError, UnicodeDecodeError) as exc:
            logger.exception("Failed to read %s file %s", role.lower(), path)
            raise InputError(f"Unable to read {role.lower()} file {path}: {exc}") from exc
        except SequenceError as exc:
            logger.error("%s file %s rejected: %s", role, path, exc)
            raise InputError(f"{path}: {exc}") from exc

    def load_query(self, text: str | None = None, path: Path | None = None) -> QuerySequence:
        if text is not None:
            try:
                return parse_sequence(text, self.alphabet)
            except SequenceError as exc:
                raise InputError(f"Query rejected: {exc}") from exc

        if path is None:
            raise InputError("No query provided.")
        database = self.load_database(path, role="Query")
        if len(database.domain_offsets) != 1:
            raise InputError(f"Query file {path} must contain exactly one FASTA record.")
        return QuerySequence(database.residues, self.alphabet)

    def prepare(self, db_path: Path, query: QuerySequence) -> PreparedSearch:
        database = self.load_database(db_path)
        try:
            table = hamming_table(database, query, self.mode)
        except SequenceError as exc:
            logger.error("Cannot compare query with %s: %s", db_path, exc)
            raise ComparisonError(str(exc)) from exc

        excluded = frozenset() if self.allow_domain_crossing else crossing_windows(database, query.length)
        logger.info(
            "Prepared search: N=%s m=%s n_prime=%s Q1=%s Q2=%s excluded=%s",
            database.size,
            query.length,
            table.n_prime,
            table.q1,
            table.q2,
            len(excluded),
        )
        return PreparedSearch(database=database, query=query, table=table, excluded=excluded)


def prepare_run(config: RunConfig) -> PreparedSearch:
    """Load the database and query named by ``config`` and build their Hamming table."""

    pipeline = SearchPipeline(
        get_alphabet(config.alphabet),
        config.hamming_mode,
        allow_domain_crossing=config.allow_domain_crossing,
    )
    query = pipeline.load_query(config.query, config.query_path)
    if config.db_path is None:
        raise InputError("No database provided.")
    return pipeline.prepare(config.db_path, query)
