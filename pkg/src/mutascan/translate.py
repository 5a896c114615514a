"""DNA to protein translation with the standard genetic code."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import EmptyFrame, NoORF, NotDNA
from .seqio import Alphabet, Sequence

BASES = "TCAG"
# NCBI translation table 1, codons enumerated in TCAG order
_AMINO = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG"
CODON_TABLE: dict[str, str] = {
    "".join(c): aa for c, aa in zip(itertools.product(BASES, repeat=3), _AMINO)
}
STOP_CODONS = frozenset(c for c, aa in CODON_TABLE.items() if aa == "*")
START_CODON = "ATG"

_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")


class StopPolicy(str, enum.Enum):
    TRUNCATE = "truncate"
    THROUGH = "through"


def translate_codon(codon: str) -> str:
    if "N" in codon:
        return "X"
    return CODON_TABLE[codon]


def translate_residues(residues: str, frame: int, stop_policy: StopPolicy) -> str:
    out = []
    for i in range(frame, len(residues) - 2, 3):
        aa = translate_codon(residues[i : i + 3])
        if aa == "*" and stop_policy is StopPolicy.TRUNCATE:
            break
        out.append(aa)
    return "".join(out)


def _require_dna(dna: Sequence):
    if dna.alphabet is not Alphabet.DNA:
        raise NotDNA(f"sequence {dna.id!r} is {dna.alphabet.value}, not DNA")


def translate(
    dna: Sequence, frame: int = 0, stop_policy: StopPolicy = StopPolicy.TRUNCATE
) -> Sequence | None:
    """Translate ``dna`` from offset ``frame`` (0, 1 or 2).

    With ``TRUNCATE`` the protein ends before the first stop codon and may
    come out empty, in which case ``None`` is returned.  Codons containing
    ``N`` become ``X``; trailing partial codons are dropped.
    """
    _require_dna(dna)
    stop_policy = StopPolicy(stop_policy)
    if frame not in (0, 1, 2):
        raise ValueError(f"frame must be 0, 1 or 2, got {frame!r}")
    if len(dna) - frame < 3:
        raise EmptyFrame(f"{dna.id!r}: fewer than 3 residues after offset {frame}")
    protein = translate_residues(dna.residues, frame, stop_policy)
    if not protein:
        return None
    return Sequence(dna.id, protein, Alphabet.PROTEIN, dna.description)


@dataclass(frozen=True)
class ORF:
    frame: int
    start: int  # nucleotide offset of the start codon
    protein: str  # from the start codon up to (not including) the stop

    @property
    def end(self) -> int:
        """Nucleotide offset just past the last translated codon."""
        return self.start + 3 * len(self.protein)


def find_orf(dna: Sequence) -> ORF:
    """Longest stop-free run beginning at ``M`` over the three forward frames.

    Ties go to the smaller frame, then to the earlier start.
    """
    _require_dna(dna)
    if len(dna) < 3:
        raise EmptyFrame(f"{dna.id!r} is shorter than one codon")
    best = None
    for frame in range(3):
        aa = translate_residues(dna.residues, frame, StopPolicy.THROUGH)
        run_start = None
        for i, a in enumerate(aa + "*"):
            if a == "*":
                if run_start is not None:
                    length = i - run_start
                    if best is None or length > len(best.protein):
                        best = ORF(frame, frame + 3 * run_start, aa[run_start:i])
                run_start = None
            elif a == "M" and run_start is None:
                run_start = i
    if best is None:
        raise NoORF(f"no start codon in any forward frame of {dna.id!r}")
    return best


def best_orf_frame(dna: Sequence) -> tuple[int, Sequence]:
    orf = find_orf(dna)
    return orf.frame, Sequence(dna.id, orf.protein, Alphabet.PROTEIN, dna.description)


def revcomp(dna: Sequence) -> Sequence:
    _require_dna(dna)
    return Sequence(dna.id, dna.residues.translate(_COMPLEMENT)[::-1], Alphabet.DNA, dna.description)
