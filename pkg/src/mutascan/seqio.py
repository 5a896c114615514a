"""FASTA parsing, writing and fetching."""

from __future__ import annotations

import enum
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field

from .errors import (
    EmptyInput,
    EmptyRecord,
    IllegalResidue,
    MalformedHeader,
    ParseError,
    RemoteError,
    TransportError,
)

DNA_LETTERS = frozenset("ACGTN")
AMINO_ACIDS = frozenset("ACDEFGHIKLMNPQRSTVWY")
PROTEIN_LETTERS = AMINO_ACIDS | frozenset("*X")

ACCESSION_PLACEHOLDER = "{accession}"


class Alphabet(str, enum.Enum):
    DNA = "DNA"
    PROTEIN = "Protein"


@dataclass(frozen=True)
class Sequence:
    """An identified residue string.

    ``rna_converted`` is set when the parser mapped ``U`` to ``T``; it is
    a warning flag only and does not take part in equality.
    """

    id: str
    residues: str
    alphabet: Alphabet = Alphabet.DNA
    description: str = ""
    rna_converted: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.id or any(c.isspace() for c in self.id):
            raise ValueError(f"bad sequence id {self.id!r}")
        if not self.residues:
            raise ValueError(f"sequence {self.id!r} has no residues")
        allowed = DNA_LETTERS if self.alphabet is Alphabet.DNA else PROTEIN_LETTERS
        bad = set(self.residues) - allowed
        if bad:
            raise ValueError(
                f"residues {''.join(sorted(bad))!r} not allowed in {self.alphabet.value} sequence"
            )

    def __len__(self):
        return len(self.residues)

    @classmethod
    def dna(cls, id: str, residues: str, description: str = "") -> "Sequence":
        return cls(id, residues.upper(), Alphabet.DNA, description)

    @classmethod
    def protein(cls, id: str, residues: str, description: str = "") -> "Sequence":
        return cls(id, residues.upper(), Alphabet.PROTEIN, description)


def _finish_record(header, chunks, header_line):
    parts = header.split(None, 1)
    if not parts:
        raise MalformedHeader(f"line {header_line}: empty identifier")
    ident = parts[0]
    desc = parts[1].strip() if len(parts) > 1 else ""
    residues = "".join(c for c, _ in chunks)
    if not residues:
        raise EmptyRecord(f"record {ident!r} (line {header_line}) has no residues")

    is_protein = any(c not in "ACGTNU" for c in residues)
    if is_protein:
        for c, line in chunks:
            if c not in PROTEIN_LETTERS:
                raise IllegalResidue(c, line)
        return Sequence(ident, residues, Alphabet.PROTEIN, desc)
    converted = "U" in residues
    return Sequence(ident, residues.replace("U", "T"), Alphabet.DNA, desc, converted)


def parse_fasta(text: str) -> list[Sequence]:
    """Parse FASTA text into a list of sequences, in file order.

    Residues are upper-cased; the alphabet is inferred per record (protein
    as soon as a letter outside ``ACGTNU`` shows up).
    """
    records = []
    header = None
    header_line = 0
    chunks: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None:
                records.append(_finish_record(header, chunks, header_line))
            header = line[1:].strip()
            header_line = lineno
            chunks = []
            continue
        if header is None:
            raise MalformedHeader(f"line {lineno}: sequence data before the first '>' header")
        for c in line:
            if c.isspace():
                continue
            c = c.upper()
            if c not in PROTEIN_LETTERS and c != "U":
                raise IllegalResidue(c, lineno)
            chunks.append((c, lineno))
    if header is None:
        raise EmptyInput("no FASTA records found")
    records.append(_finish_record(header, chunks, header_line))
    return records


def write_fasta(seqs: list[Sequence], line_width: int = 60) -> str:
    if line_width < 1:
        raise ValueError("line_width must be >= 1")
    out = []
    for s in seqs:
        out.append(f">{s.id} {s.description}\n" if s.description else f">{s.id}\n")
        for i in range(0, len(s.residues), line_width):
            out.append(s.residues[i : i + line_width] + "\n")
    return "".join(out)


def read_fasta_file(path) -> list[Sequence]:
    with open(path, encoding="utf-8") as fh:
        return parse_fasta(fh.read())


def fetch_reference(accession: str, endpoint: str, timeout: float = 30.0) -> Sequence:
    """GET ``endpoint`` with ``{accession}`` filled in and parse the body as FASTA.

    Returns the first record of the response.
    """
    if ACCESSION_PLACEHOLDER not in endpoint:
        raise ValueError(f"endpoint must contain {ACCESSION_PLACEHOLDER}")
    url = endpoint.replace(ACCESSION_PLACEHOLDER, urllib.parse.quote(accession, safe=""))
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            body = resp.read()
    except urllib.error.HTTPError as exc:
        raise RemoteError(exc.code, url) from exc
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise TransportError(f"{url}: {exc}") from exc
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"response from {url} is not UTF-8") from exc
    return parse_fasta(text)[0]
