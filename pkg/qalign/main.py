"""Application entry point: ``python -m qalign.main <command> ...``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from qalign.config import (
    ConfigError,
    OutputFormat,
    RunConfig,
    SearchDefaults,
    Subcommand,
    build_run_config,
    load_config,
)
from qalign.handlers.encode_handler import cmd_encode
from qalign.handlers.search_handler import cmd_align, cmd_exact
from qalign.handlers.stats_handler import cmd_stats
from qalign.handlers.trace_handler import cmd_trace
from qalign.services.align import InvalidParams
from qalign.services.logger import setup_logging
from qalign.services.pipeline import SearchPipelineError
from qalign.utils.seqdb import AlphabetKind, HammingMode

EXIT_USAGE_ERROR = 2

HANDLERS: dict[Subcommand, Callable[[RunConfig], int]] = {
    Subcommand.EXACT: cmd_exact,
    Subcommand.ALIGN: cmd_align,
    Subcommand.TRACE: cmd_trace,
    Subcommand.STATS: cmd_stats,
    Subcommand.ENCODE: cmd_encode,
}


def _common_parser() -> argparse.ArgumentParser:
    """Options shared by every command; defaults of ``None`` fall back to QALIGN_* settings."""

    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--db", type=Path, default=None, help="FASTA database; every record is one domain.")
    query = parser.add_mutually_exclusive_group()
    query.add_argument("--query", type=str, default=None, help="Inline query residues.")
    query.add_argument("--query-file", type=Path, default=None, help="FASTA file with a single query record.")
    parser.add_argument(
        "--alphabet",
        choices=[kind.value for kind in AlphabetKind],
        default=None,
        help="Residue alphabet (defaults to QALIGN_ALPHABET or 'protein').",
    )
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in HammingMode],
        default=None,
        help="Hamming distance over bits or residues (defaults to QALIGN_HAMMING_MODE or 'bit').",
    )
    parser.add_argument("--seed", type=int, default=None, help="Master seed (defaults to QALIGN_SEED).")
    parser.add_argument(
        "--no-domain-crossing",
        action="store_true",
        default=None,
        help="Never mark windows that span a domain boundary.",
    )
    parser.add_argument(
        "--compressed",
        action="store_true",
        help="Evolve one amplitude per distance class instead of the dense vector.",
    )
    parser.add_argument("--output", type=Path, default=None, help="Machine-readable output file.")
    parser.add_argument(
        "--format",
        choices=[fmt.value for fmt in OutputFormat],
        default=None,
        help="Output file format (default csv).",
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging output.")
    return parser


def _search_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--repeats", "-r", type=int, default=None, help="BBHT runs per distance level.")
    parser.add_argument("--n-max", type=int, default=None, help="Largest Hamming distance searched.")
    parser.add_argument(
        "--lambda",
        dest="growth_factor",
        type=float,
        default=None,
        help="BBHT growth factor in (1, 4/3) (defaults to QALIGN_LAMBDA or 1.2).",
    )
    parser.add_argument(
        "--timeout-factor",
        type=float,
        default=None,
        help="A BBHT run stops after ceil(factor * sqrt(n_prime)) oracle calls.",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per handler."""

    common = _common_parser()
    search = _search_parser()
    parser = argparse.ArgumentParser(
        prog="qalign",
        description=(
            "Simulated Grover/BBHT search for optimal Hamming-distance alignment of a query "
            "against a concatenated sequence database."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser(
        Subcommand.EXACT.value,
        parents=[common],
        help="Fixed-iteration Grover search for an exact match.",
    )

    align = commands.add_parser(
        Subcommand.ALIGN.value,
        parents=[common, search],
        help="Iterative optimal alignment over increasing Hamming distance.",
    )
    align.add_argument("--all", action="store_true", help="Enumerate every optimal position.")

    trace = commands.add_parser(
        Subcommand.TRACE.value,
        parents=[common],
        help="Write simulated and predicted marked probability for k = 0..K.",
    )
    trace.add_argument("--distance", type=int, default=None, help="Marked Hamming distance (default 0).")
    trace.add_argument("--max-k", type=int, default=None, help="Last step written (default 3*ceil(sqrt(n_prime))).")

    stats = commands.add_parser(
        Subcommand.STATS.value,
        parents=[common, search],
        help="Monte-Carlo success rates and oracle-call statistics.",
    )
    stats.add_argument("--trials", type=int, default=None, help="Independent seeded runs (default 1000).")
    stats.add_argument("--workers", type=int, default=None, help="Worker threads (defaults to QALIGN_WORKERS).")
    stats.add_argument("--stats-mode", choices=["bbht", "align"], default=None, help="Single BBHT runs or full alignments.")
    stats.add_argument("--distance", type=int, default=None, help="Marked Hamming distance for bbht mode (default 0).")

    commands.add_parser(
        Subcommand.ENCODE.value,
        parents=[common],
        help="Show residue codes, bit strings and register sizes.",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Execute the requested command and return its exit status."""

    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        defaults: SearchDefaults = load_config()
    except ConfigError as exc:
        setup_logging()
        logging.getLogger("qalign.main").error("Configuration failed: %s", exc)
        return EXIT_USAGE_ERROR

    logger = setup_logging(logging.DEBUG if args.verbose else defaults.log_level)
    try:
        config = build_run_config(args, defaults)
        return HANDLERS[config.subcommand](config)
    except (ConfigError, SearchPipelineError, InvalidParams, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except Exception:
        logger.exception("Unexpected failure in %s", args.command)
        raise


if __name__ == "__main__":
    raise SystemExit(main())
