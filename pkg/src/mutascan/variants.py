"""Variant calling from alignments and the protein-change candidate rule."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .align import GAP, Alignment, ScoringScheme, default_scheme, global_align
from .errors import NotDNA
from .seqio import Alphabet, Sequence
from .translate import StopPolicy, translate_residues, find_orf


class Level(str, enum.Enum):
    DNA = "DNA"
    PROTEIN = "Protein"


class Kind(str, enum.Enum):
    SUBSTITUTION = "Substitution"
    INSERTION = "Insertion"
    DELETION = "Deletion"


@dataclass(frozen=True)
class Variant:
    """One reference/patient difference.

    ``ref_pos`` is 0-based in the ungapped reference.  An insertion at
    ``ref_pos`` sits immediately before reference residue ``ref_pos`` (after
    the first ``ref_pos`` residues), so ``ref_pos == len(reference)`` is an
    insertion at the very end.
    """

    kind: Kind
    ref_pos: int
    ref_allele: str
    alt_allele: str
    level: Level = Level.DNA

    def __post_init__(self):
        if self.ref_pos < 0:
            raise ValueError("ref_pos must be non-negative")
        if self.kind is Kind.SUBSTITUTION:
            ok = len(self.ref_allele) == len(self.alt_allele) >= 1
        elif self.kind is Kind.INSERTION:
            ok = not self.ref_allele and bool(self.alt_allele)
        else:
            ok = bool(self.ref_allele) and not self.alt_allele
        if not ok:
            raise ValueError(f"alleles {self.ref_allele!r}/{self.alt_allele!r} invalid for {self.kind.value}")

    @property
    def notation(self) -> str:
        if self.kind is Kind.SUBSTITUTION:
            return f"{self.ref_pos}:{self.ref_allele}>{self.alt_allele}"
        if self.kind is Kind.INSERTION:
            return f"{self.ref_pos}:ins:{self.alt_allele}"
        return f"{self.ref_pos}:del:{self.ref_allele}"

    def __str__(self):
        return self.notation

    def to_dict(self) -> dict:
        return {
            "level": self.level.value,
            "kind": self.kind.value,
            "ref_pos": self.ref_pos,
            "ref_allele": self.ref_allele,
            "alt_allele": self.alt_allele,
            "notation": self.notation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Variant":
        return cls(Kind(d["kind"]), int(d["ref_pos"]), d["ref_allele"], d["alt_allele"], Level(d["level"]))


_NOTATION = re.compile(r"^(\d+):(?:([A-Z*]+)>([A-Z*]+)|INS:([A-Z*]+)|DEL:([A-Z*]+))$")


def parse_variant(text: str, level: Level = Level.DNA) -> Variant:
    """Inverse of ``Variant.notation``: ``12:A>G``, ``12:ins:TT``, ``12:del:C``."""
    m = _NOTATION.match(text.strip().upper())
    if not m:
        raise ValueError(f"cannot parse variant {text!r}")
    pos = int(m.group(1))
    if m.group(2):
        return Variant(Kind.SUBSTITUTION, pos, m.group(2), m.group(3), level)
    if m.group(4):
        return Variant(Kind.INSERTION, pos, "", m.group(4), level)
    return Variant(Kind.DELETION, pos, m.group(5), "", level)


def _column_kind(r, p):
    if r == p:
        return None
    if r == GAP:
        return Kind.INSERTION
    if p == GAP:
        return Kind.DELETION
    return Kind.SUBSTITUTION


def call_variants(
    al: Alignment, reference_is_row_a: bool = True, level: Level = Level.DNA
) -> list[Variant]:
    """Differences between the reference row and the patient row.

    Adjacent differing columns of the same kind are merged into one variant.
    The result is in column order, which is also ascending ``ref_pos``.
    """
    ref_row, alt_row = (al.row_a, al.row_b) if reference_is_row_a else (al.row_b, al.row_a)
    out = []
    ref_pos = 0
    run_kind = None
    run_pos = 0
    run_ref: list[str] = []
    run_alt: list[str] = []

    def flush():
        if run_kind is not None:
            out.append(Variant(run_kind, run_pos, "".join(run_ref), "".join(run_alt), level))

    for r, p in zip(ref_row, alt_row):
        kind = _column_kind(r, p)
        if kind is not run_kind:
            flush()
            run_kind = kind
            run_pos = ref_pos
            run_ref, run_alt = [], []
        if kind is not None:
            if r != GAP:
                run_ref.append(r)
            if p != GAP:
                run_alt.append(p)
        if r != GAP:
            ref_pos += 1
    flush()
    return out


def apply_variants(reference: str, variants: list[Variant]) -> str:
    """Rebuild the patient string from the reference and a ``call_variants`` list."""
    s = reference
    for v in reversed(variants):
        p = v.ref_pos
        if s[p : p + len(v.ref_allele)] != v.ref_allele:
            raise ValueError(f"variant {v} does not match the reference")
        s = s[:p] + v.alt_allele + s[p + len(v.ref_allele) :]
    return s


class Rationale(str, enum.Enum):
    NO_DNA_DIFFERENCE = "NoDnaDifference"
    SILENT_DNA_ONLY = "SilentDnaOnly"
    PROTEIN_CHANGED = "ProteinChanged"


@dataclass
class CandidateVerdict:
    dna_variants: list[Variant]
    protein_variants: list[Variant]
    malignant_candidate: bool
    rationale: Rationale
    dna_alignment: Alignment | None = None
    protein_alignment: Alignment | None = None
    frame: int | None = None
    ref_protein: str = ""
    patient_protein: str = ""
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dna_variants": [v.to_dict() for v in self.dna_variants],
            "protein_variants": [v.to_dict() for v in self.protein_variants],
            "malignant_candidate": self.malignant_candidate,
            "rationale": self.rationale.value,
            "dna_alignment": self.dna_alignment.to_dict() if self.dna_alignment else None,
            "protein_alignment": self.protein_alignment.to_dict() if self.protein_alignment else None,
            "frame": self.frame,
            "ref_protein": self.ref_protein,
            "patient_protein": self.patient_protein,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CandidateVerdict":
        return cls(
            [Variant.from_dict(v) for v in d["dna_variants"]],
            [Variant.from_dict(v) for v in d["protein_variants"]],
            bool(d["malignant_candidate"]),
            Rationale(d["rationale"]),
            Alignment.from_dict(d["dna_alignment"]) if d.get("dna_alignment") else None,
            Alignment.from_dict(d["protein_alignment"]) if d.get("protein_alignment") else None,
            d.get("frame"),
            d.get("ref_protein", ""),
            d.get("patient_protein", ""),
            list(d.get("notes", [])),
        )


def _map_ref_position(al: Alignment, ref_pos: int) -> int:
    """Patient coordinate of the first patient residue at or after ``ref_pos``."""
    r = p = 0
    for a, b in zip(al.row_a, al.row_b):
        if a != GAP and r >= ref_pos and b != GAP:
            return p
        if a != GAP:
            r += 1
        if b != GAP:
            p += 1
    return p


def _coding_protein(residues: str, start: int) -> str:
    if len(residues) - start < 3:
        return ""
    return translate_residues(residues, start, StopPolicy.TRUNCATE)


def _protein_alignment(ref_prot: str, alt_prot: str, scheme: ScoringScheme) -> Alignment:
    if ref_prot and alt_prot:
        return global_align(
            Sequence("ref", ref_prot, Alphabet.PROTEIN),
            Sequence("patient", alt_prot, Alphabet.PROTEIN),
            scheme,
        )
    # one side translated to nothing; everything on the other side is a gap
    row_a = ref_prot or GAP * len(alt_prot)
    row_b = alt_prot or GAP * len(ref_prot)
    score = scheme.gap_cost(max(len(ref_prot), len(alt_prot)))
    return Alignment(row_a, row_b, score, scheme)


def assess_candidate(
    ref_dna: Sequence,
    patient_dna: Sequence,
    frame: int | str = "auto",
    scheme_dna: ScoringScheme | None = None,
    scheme_protein: ScoringScheme | None = None,
) -> CandidateVerdict:
    """Align reference and patient DNA, then their proteins.

    The patient is a malignancy candidate exactly when the protein changes.
    With ``frame="auto"`` the reading frame and start codon come from the
    reference's longest ORF; the patient is translated from the aligned
    position of that start codon so upstream indels do not shift its frame.
    An explicit frame translates both sequences from that offset.
    """
    for s in (ref_dna, patient_dna):
        if s.alphabet is not Alphabet.DNA:
            raise NotDNA(f"sequence {s.id!r} is not DNA")
    scheme_dna = scheme_dna or default_scheme(Alphabet.DNA)
    scheme_protein = scheme_protein or default_scheme(Alphabet.PROTEIN)

    dna_al = global_align(ref_dna, patient_dna, scheme_dna)
    dna_variants = call_variants(dna_al, True, Level.DNA)
    if not dna_variants:
        return CandidateVerdict([], [], False, Rationale.NO_DNA_DIFFERENCE, dna_al)

    notes = []
    if frame == "auto":
        orf = find_orf(ref_dna)
        used_frame = orf.frame
        ref_start = orf.start
        alt_start = _map_ref_position(dna_al, ref_start)
        if any(v.ref_pos < ref_start + 3 and v.ref_pos + max(1, len(v.ref_allele)) > ref_start
               for v in dna_variants):
            notes.append("start codon region altered in patient")
    else:
        used_frame = int(frame)
        if used_frame not in (0, 1, 2):
            raise ValueError(f"frame must be 0, 1, 2 or 'auto', got {frame!r}")
        ref_start = alt_start = used_frame

    ref_prot = _coding_protein(ref_dna.residues, ref_start)
    alt_prot = _coding_protein(patient_dna.residues, alt_start)
    if not ref_prot and not alt_prot:
        notes.append("neither sequence translates to a protein in this frame")
        return CandidateVerdict(
            dna_variants, [], False, Rationale.SILENT_DNA_ONLY, dna_al, None, used_frame, "", "", notes
        )
    prot_al = _protein_alignment(ref_prot, alt_prot, scheme_protein)
    protein_variants = call_variants(prot_al, True, Level.PROTEIN)
    changed = bool(protein_variants)
    return CandidateVerdict(
        dna_variants,
        protein_variants,
        changed,
        Rationale.PROTEIN_CHANGED if changed else Rationale.SILENT_DNA_ONLY,
        dna_al,
        prot_al,
        used_frame,
        ref_prot,
        alt_prot,
        notes,
    )
