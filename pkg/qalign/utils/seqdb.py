"""Residue alphabets, FASTA ingestion and Hamming distance tables."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

logger = logging.getLogger("qalign.seqdb")


class SequenceError(ValueError):
    """Base exception for sequence ingestion and comparison failures."""


class UnknownLetter(SequenceError):
    """A character is not part of the selected alphabet."""

    def __init__(self, letter: str, *, line: int | None = None, column: int | None = None) -> None:
        location = ""
        if line is not None:
            location = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"Unknown residue letter {letter!r}{location}")
        self.letter = letter
        self.line = line
        self.column = column


class FastaParseError(SequenceError):
    """The FASTA input is malformed."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(f"{message} (line {line})" if line is not None else message)
        self.line = line


class EmptyDatabase(SequenceError):
    """No residues were found in the input."""


class OutOfRange(SequenceError):
    """A window position lies outside the database."""


class AlphabetMismatch(SequenceError):
    """Database and query use different alphabets."""


class QueryLongerThanDatabase(SequenceError):
    """The query has more residues than the database."""


class AlphabetKind(str, enum.Enum):
    PROTEIN = "protein"
    DNA = "dna"


class HammingMode(str, enum.Enum):
    BIT = "bit"
    RESIDUE = "residue"


@dataclass(frozen=True, slots=True)
class Alphabet:
    """Ordered residue letters and their fixed-width binary encoding."""

    kind: AlphabetKind
    bits_per_residue: int
    letters: tuple[str, ...]
    _codes: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_codes", {letter: code for code, letter in enumerate(self.letters)})

    def __len__(self) -> int:
        return len(self.letters)

    def code_of(self, letter: str) -> int | None:
        return self._codes.get(letter.upper())


# Alphabetical one-letter codes; 5-bit codes 20..31 are never emitted.
PROTEIN = Alphabet(AlphabetKind.PROTEIN, 5, tuple("ACDEFGHIKLMNPQRSTVWY"))
DNA = Alphabet(AlphabetKind.DNA, 2, tuple("ACGT"))

_ALPHABETS = {AlphabetKind.PROTEIN: PROTEIN, AlphabetKind.DNA: DNA}


def get_alphabet(kind: AlphabetKind | str) -> Alphabet:
    """Return the alphabet registered for ``kind``."""

    return _ALPHABETS[AlphabetKind(kind)]


@dataclass(frozen=True, slots=True)
class SequenceDatabase:
    """Domains concatenated end-to-end into one residue list."""

    residues: np.ndarray
    domain_offsets: tuple[int, ...]
    alphabet: Alphabet
    headers: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        size = len(self.residues)
        if size == 0:
            raise EmptyDatabase("Sequence database contains no residues.")
        if not self.domain_offsets or self.domain_offsets[0] != 0:
            raise SequenceError("Domain offsets must start at 0.")
        if any(b <= a for a, b in zip(self.domain_offsets, self.domain_offsets[1:])):
            raise SequenceError("Domain offsets must be strictly increasing.")
        if self.domain_offsets[-1] >= size:
            raise SequenceError("Domain offsets must lie inside the database.")
        if int(self.residues.max()) >= len(self.alphabet):
            raise SequenceError("Residue code exceeds the alphabet size.")

    @property
    def size(self) -> int:
        return len(self.residues)


@dataclass(frozen=True, slots=True)
class QuerySequence:
    residues: np.ndarray
    alphabet: Alphabet

    def __post_init__(self) -> None:
        if len(self.residues) < 1:
            raise SequenceError("Query sequence must contain at least one residue.")

    @property
    def length(self) -> int:
        return len(self.residues)


@dataclass(frozen=True, slots=True)
class HammingTable:
    """Hamming distances T[0..N-m] between every database window and the query."""

    values: np.ndarray
    mode: HammingMode
    m: int
    bits_per_residue: int

    @property
    def n_prime(self) -> int:
        return len(self.values)

    @property
    def max_distance(self) -> int:
        """Upper bound of any entry for this mode."""

        return self.bits_per_residue * self.m if self.mode is HammingMode.BIT else self.m

    @property
    def q1(self) -> int:
        """Qubits needed by the window register."""

        return self.bits_per_residue * self.m

    @property
    def q2(self) -> int:
        """Smallest Q with 2**Q > N - m, i.e. qubits needed by the position register."""

        return (self.n_prime - 1).bit_length()

    def count(self, distance: int) -> int:
        return int(np.count_nonzero(self.values == distance))

    def positions(self, distance: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.values == distance)]


def encode_residue(letter: str, alphabet: Alphabet) -> int:
    """Return the code of ``letter``; lowercase input is normalized."""

    if len(letter) != 1:
        raise UnknownLetter(letter)
    code = alphabet.code_of(letter)
    if code is None:
        raise UnknownLetter(letter)
    return code


def decode_residue(code: int, alphabet: Alphabet) -> str:
    if not 0 <= code < len(alphabet):
        raise UnknownLetter(str(code))
    return alphabet.letters[code]


def residue_bits(code: int, alphabet: Alphabet) -> str:
    """Fixed-width binary representation of a residue code, most significant bit first."""

    decode_residue(code, alphabet)
    return format(code, f"0{alphabet.bits_per_residue}b")


def _encode_line(text: str, alphabet: Alphabet, *, line: int | None = None) -> list[int]:
    codes: list[int] = []
    for column, letter in enumerate(text, start=1):
        code = alphabet.code_of(letter)
        if code is None:
            raise UnknownLetter(letter, line=line, column=column)
        codes.append(code)
    return codes


def parse_sequence(text: str, alphabet: Alphabet) -> QuerySequence:
    """Build a query from an inline residue string; whitespace is ignored."""

    cleaned = "".join(text.split())
    if not cleaned:
        raise SequenceError("Query sequence is empty.")
    return QuerySequence(np.asarray(_encode_line(cleaned, alphabet), dtype=np.uint8), alphabet)


def iter_fasta(lines: Iterable[str]) -> Iterator[tuple[str, list[tuple[int, str]]]]:
    """Yield ``(header, [(line_number, sequence_line), ...])`` for every FASTA record."""

    header: str | None = None
    chunks: list[tuple[int, str]] = []
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n").strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None:
                yield header, chunks
            header, chunks = line[1:].strip(), []
        elif header is None:
            raise FastaParseError("Sequence data before the first '>' header", line=number)
        else:
            chunks.append((number, "".join(line.split())))
    if header is not None:
        yield header, chunks


def load_fasta(path: str | Path, alphabet: Alphabet) -> SequenceDatabase:
    """Load every FASTA record of ``path`` as one domain of a concatenated database."""

    path = Path(path)
    residues: list[int] = []
    offsets: list[int] = []
    headers: list[str] = []
    with path.open("r", encoding="utf-8", newline="") as handle:
        for header, chunks in iter_fasta(handle):
            start = len(residues)
            for number, text in chunks:
                residues.extend(_encode_line(text, alphabet, line=number))
            if len(residues) == start:
                logger.warning("Skipping empty FASTA record %r in %s", header, path.name)
                continue
            offsets.append(start)
            headers.append(header)

    if not residues:
        raise EmptyDatabase(f"No residues found in {path}")

    logger.info("Loaded %s domains (%s residues) from %s", len(offsets), len(residues), path.name)
    return SequenceDatabase(
        residues=np.asarray(residues, dtype=np.uint8),
        domain_offsets=tuple(offsets),
        alphabet=alphabet,
        headers=tuple(headers),
    )


def database_from_strings(records: Iterable[str], alphabet: Alphabet) -> SequenceDatabase:
    """Concatenate in-memory residue strings into a database, one domain per string."""

    residues: list[int] = []
    offsets: list[int] = []
    for text in records:
        codes = _encode_line("".join(text.split()), alphabet)
        if codes:
            offsets.append(len(residues))
            residues.extend(codes)
    if not residues:
        raise EmptyDatabase("Sequence database contains no residues.")
    return SequenceDatabase(np.asarray(residues, dtype=np.uint8), tuple(offsets), alphabet)


def complete_database(m: int, alphabet: Alphabet = PROTEIN) -> SequenceDatabase:
    """Database of length 2**m + m - 1 whose 2**m windows of length m are all distinct.

    Built from a binary de Bruijn sequence over the first two letters of ``alphabet``.
    """

    if m < 1:
        raise SequenceError("Window length must be positive.")
    bits = [0] * (2 * m)
    sequence: list[int] = []

    def extend(t: int, p: int) -> None:
        if t > m:
            if m % p == 0:
                sequence.extend(bits[1 : p + 1])
            return
        bits[t] = bits[t - p]
        extend(t + 1, p)
        for value in range(bits[t - p] + 1, 2):
            bits[t] = value
            extend(t + 1, t)

    extend(1, 1)
    linear = sequence + sequence[: m - 1]
    return SequenceDatabase(np.asarray(linear, dtype=np.uint8), (0,), alphabet)


def window(db: SequenceDatabase, i: int, m: int) -> np.ndarray:
    """Residues ``i .. i+m-1``; windows may span domain boundaries."""

    if m < 1 or i < 0 or i + m > db.size:
        raise OutOfRange(f"Window ({i}, {m}) outside database of {db.size} residues")
    return db.residues[i : i + m]


def crossing_windows(db: SequenceDatabase, m: int) -> frozenset[int]:
    """Positions whose length-``m`` window spans at least one domain boundary."""

    crossing: set[int] = set()
    n_prime = db.size - m + 1
    for boundary in db.domain_offsets[1:]:
        crossing.update(range(max(0, boundary - m + 1), min(boundary, n_prime)))
    return frozenset(crossing)


_POPCOUNT = np.array([bin(value).count("1") for value in range(256)], dtype=np.int64)


def hamming_table(
    db: SequenceDatabase,
    query: QuerySequence,
    mode: HammingMode | str = HammingMode.BIT,
) -> HammingTable:
    """Compute T[i] for every window: XOR with the query, then count set bits (or residues)."""

    mode = HammingMode(mode)
    if db.alphabet != query.alphabet:
        raise AlphabetMismatch(
            f"Database alphabet {db.alphabet.kind.value} does not match query alphabet "
            f"{query.alphabet.kind.value}"
        )
    m = query.length
    if m > db.size:
        raise QueryLongerThanDatabase(f"Query length {m} exceeds database size {db.size}")

    n_prime = db.size - m + 1
    values = np.zeros(n_prime, dtype=np.int64)
    for alpha in range(m):
        diff = db.residues[alpha : alpha + n_prime] ^ query.residues[alpha]
        values += _POPCOUNT[diff] if mode is HammingMode.BIT else (diff != 0)

    logger.debug("Hamming table built: n_prime=%s m=%s mode=%s", n_prime, m, mode.value)
    return HammingTable(values=values, mode=mode, m=m, bits_per_residue=db.alphabet.bits_per_residue)
