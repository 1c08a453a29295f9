"""Write a complete database: N = 2**m + m - 1 residues whose 2**m windows are all distinct."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from tools import _env  # noqa: F401  # Ensure .env is loaded and repo root is on sys.path

from qalign.utils.seqdb import AlphabetKind, complete_database, decode_residue, get_alphabet, window

DEFAULT_ALPHABET = os.environ.get("QALIGN_ALPHABET", "protein")


def build_parser() -> argparse.ArgumentParser:
    """Create an argument parser for the database builder."""

    parser = argparse.ArgumentParser(
        description=(
            "Build the complete-database example as FASTA, optionally with a query file "
            "equal to one of its windows."
        )
    )
    parser.add_argument("--m", type=int, required=True, help="Window length m.")
    parser.add_argument("--output", type=Path, required=True, help="Destination FASTA file.")
    parser.add_argument(
        "--alphabet",
        choices=[kind.value for kind in AlphabetKind],
        default=DEFAULT_ALPHABET,
        help="Residue alphabet (defaults to QALIGN_ALPHABET or 'protein').",
    )
    parser.add_argument(
        "--query-position",
        type=int,
        default=None,
        help="Also write <output>.query.fasta holding the window at this position.",
    )
    return parser


def main() -> int:
    """Write the FASTA file(s) and return an exit status."""

    args = build_parser().parse_args()
    logging.basicConfig(level=logging.INFO, format="[%(levelname)s] %(message)s")

    try:
        alphabet = get_alphabet(args.alphabet)
        db = complete_database(args.m, alphabet)
        letters = "".join(decode_residue(int(code), alphabet) for code in db.residues)
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(f">complete m={args.m}\n{letters}\n", encoding="utf-8")
        if args.query_position is not None:
            codes = window(db, args.query_position, args.m)
            query = "".join(decode_residue(int(code), alphabet) for code in codes)
            query_path = args.output.with_suffix(".query.fasta")
            query_path.write_text(f">query position={args.query_position}\n{query}\n", encoding="utf-8")
            logging.info("Query written to %s", query_path)
    except Exception as exc:  # noqa: BLE001 - surface any operational issue to the CLI
        logging.error("Database build failed: %s", exc)
        return 1

    logging.info("Complete database (N=%s) written to %s", db.size, args.output)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
