"""Handler for the ``encode`` command: residue codes and bit strings of a query."""
from __future__ import annotations

from qalign.config import RunConfig
from qalign.handlers.output import print_report, render_rows, write_text
from qalign.services.pipeline import SearchPipeline, prepare_run
from qalign.utils.seqdb import decode_residue, get_alphabet, residue_bits


def cmd_encode(config: RunConfig) -> int:
    alphabet = get_alphabet(config.alphabet)
    pipeline = SearchPipeline(alphabet, config.hamming_mode)
    query = pipeline.load_query(config.query, config.query_path)

    rows = [
        (index, decode_residue(int(code), alphabet), int(code), residue_bits(int(code), alphabet))
        for index, code in enumerate(query.residues)
    ]
    fields: dict[str, object] = {
        "alphabet": alphabet.kind.value,
        "bits_per_residue": alphabet.bits_per_residue,
        "m": query.length,
        "q1": alphabet.bits_per_residue * query.length,
    }
    if config.db_path is not None:
        table = prepare_run(config).table
        fields.update({"n_prime": table.n_prime, "q2": table.q2})

    print_report("Encoding", fields)
    for index, letter, code, bits in rows:
        print(f"  {index:>4} {letter} {code:>2} {bits}")
    if config.output_path is not None:
        header = ("index", "letter", "code", "bits")
        write_text(render_rows(header, rows, config.output_format), config.output_path)
    return 0
