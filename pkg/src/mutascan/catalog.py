"""Pathogenic mutation catalog, feature encoding and training-set assembly."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    EmptyFrame,
    NoORF,
    DuplicateEntry,
    InsufficientSpace,
    MalformedLine,
    PositionOutOfRange,
    UnknownGene,
)
from .seqio import Sequence, parse_fasta
from .translate import CODON_TABLE, find_orf
from .variants import Kind, Level, Variant

DEFAULT_GENES = ("BRCA1", "BRCA2")
NUCLEOTIDES = "ACGT"
FLANK = 2
EMPTY_ALLELE = "-"


@dataclass(frozen=True)
class CatalogEntry:
    gene: str
    variant: Variant
    label: str = "Pathogenic"
    source: str = ""

    @property
    def key(self) -> tuple:
        v = self.variant
        return (self.gene, v.kind, v.ref_pos, v.ref_allele, v.alt_allele)

    def matches(self, gene: str, v: Variant) -> bool:
        return self.key == (gene, v.kind, v.ref_pos, v.ref_allele, v.alt_allele)

    def to_dict(self) -> dict:
        return {"gene": self.gene, "variant": self.variant.to_dict(), "label": self.label, "source": self.source}

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogEntry":
        return cls(d["gene"], Variant.from_dict(d["variant"]), d.get("label", "Pathogenic"), d.get("source", ""))


def load_catalog(text: str, genes=DEFAULT_GENES) -> list[CatalogEntry]:
    """Parse tab-separated ``gene pos ref alt source`` lines.

    ``pos`` is 0-based; ``-`` stands for an empty allele, so ``ref == "-"``
    is an insertion and ``alt == "-"`` a deletion.  Blank lines and ``#``
    comments are skipped.
    """
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 4 or len(fields) > 5:
            raise MalformedLine(lineno, f"expected 4 or 5 tab-separated fields, got {len(fields)}")
        gene, pos_s, ref, alt = (f.strip() for f in fields[:4])
        source = fields[4].strip() if len(fields) == 5 else ""
        if gene not in genes:
            raise UnknownGene(f"line {lineno}: gene {gene!r} is not one of {list(genes)}")
        try:
            pos = int(pos_s)
        except ValueError:
            raise MalformedLine(lineno, f"position {pos_s!r} is not an integer") from None
        ref = "" if ref == EMPTY_ALLELE else ref.upper()
        alt = "" if alt == EMPTY_ALLELE else alt.upper()
        if any(c not in NUCLEOTIDES for c in ref + alt):
            raise MalformedLine(lineno, "alleles must use A, C, G, T or '-'")
        if ref and alt:
            kind = Kind.SUBSTITUTION
        elif alt:
            kind = Kind.INSERTION
        elif ref:
            kind = Kind.DELETION
        else:
            raise MalformedLine(lineno, "both alleles empty")
        try:
            variant = Variant(kind, pos, ref, alt, Level.DNA)
        except ValueError as exc:
            raise MalformedLine(lineno, str(exc)) from None
        entry = CatalogEntry(gene, variant, "Pathogenic", source)
        if entry.key in seen:
            raise DuplicateEntry(f"line {lineno}: {gene} {variant} already listed")
        seen.add(entry.key)
        entries.append(entry)
    return entries


def dump_catalog(entries: list[CatalogEntry]) -> str:
    lines = ["# gene\tpos\tref\talt\tsource"]
    for e in entries:
        v = e.variant
        lines.append(
            "\t".join((e.gene, str(v.ref_pos), v.ref_allele or EMPTY_ALLELE, v.alt_allele or EMPTY_ALLELE, e.source))
        )
    return "\n".join(lines) + "\n"


# -- features ---------------------------------------------------------------


def feature_length(gene_count: int) -> int:
    return gene_count + 3 + 1 + 4 + 4 + 4 * FLANK * 2


def feature_layout(genes=DEFAULT_GENES) -> dict[str, slice]:
    g = len(genes)
    names = [("gene", g), ("kind", 3), ("position", 1), ("ref_base", 4), ("alt_base", 4),
             ("context_5p", 4 * FLANK), ("context_3p", 4 * FLANK)]
    out = {}
    pos = 0
    for name, size in names:
        out[name] = slice(pos, pos + size)
        pos += size
    return out


_KIND_INDEX = {Kind.SUBSTITUTION: 0, Kind.INSERTION: 1, Kind.DELETION: 2}


def _one_hot_base(vec, offset, base):
    i = NUCLEOTIDES.find(base) if base else -1
    if i >= 0:
        vec[offset + i] = 1.0


def encode(
    gene: str, v: Variant, reference: Sequence, gene_length: int | None = None, genes=DEFAULT_GENES
) -> np.ndarray:
    """Fixed-length feature vector in [0, 1] for one DNA variant.

    Multi-base alleles contribute their first base.  Flanking bases run
    from two before ``ref_pos`` to two after the reference allele; bases off
    either end of the reference, and ``N``, encode as all zeros.
    """
    if gene not in genes:
        raise UnknownGene(f"gene {gene!r} is not one of {list(genes)}")
    if v.level is not Level.DNA:
        raise ValueError("only DNA-level variants can be encoded")
    if gene_length is None:
        gene_length = len(reference)
    if not 0 <= v.ref_pos < gene_length:
        raise PositionOutOfRange(f"position {v.ref_pos} outside gene of length {gene_length}")
    layout = feature_layout(genes)
    vec = np.zeros(feature_length(len(genes)))
    vec[layout["gene"].start + genes.index(gene)] = 1.0
    vec[layout["kind"].start + _KIND_INDEX[v.kind]] = 1.0
    vec[layout["position"].start] = v.ref_pos / gene_length
    _one_hot_base(vec, layout["ref_base"].start, v.ref_allele[:1])
    _one_hot_base(vec, layout["alt_base"].start, v.alt_allele[:1])
    seq = reference.residues
    after = v.ref_pos + len(v.ref_allele)
    for k in range(FLANK):
        left = v.ref_pos - FLANK + k
        if 0 <= left < len(seq):
            _one_hot_base(vec, layout["context_5p"].start + 4 * k, seq[left])
        right = after + k
        if 0 <= right < len(seq):
            _one_hot_base(vec, layout["context_3p"].start + 4 * k, seq[right])
    return vec


@dataclass
class LabeledExample:
    features: np.ndarray
    target: np.ndarray
    gene: str
    variant: Variant

    @property
    def is_positive(self) -> bool:
        return bool(self.target.any())

    def to_dict(self) -> dict:
        return {
            "gene": self.gene,
            "variant": self.variant.to_dict(),
            "features": self.features.tolist(),
            "target": self.target.tolist(),
        }


def _substitution_pool(reference: Sequence, taken: set, gene: str):
    """Synonymous and non-synonymous single-base substitutions in the reference ORF."""
    seq = reference.residues
    try:
        orf = find_orf(reference)
        coding = range(orf.start, orf.end)
        start = orf.start
    except (NoORF, EmptyFrame):
        coding = range(0)
        start = 0
    synonymous, other = [], []
    coding_set = set(coding)
    for pos, base in enumerate(seq):
        if base not in NUCLEOTIDES:
            continue
        for alt in NUCLEOTIDES:
            if alt == base or (gene, Kind.SUBSTITUTION, pos, base, alt) in taken:
                continue
            silent = False
            if pos in coding_set:
                c0 = start + 3 * ((pos - start) // 3)
                codon = seq[c0 : c0 + 3]
                mutated = codon[: pos - c0] + alt + codon[pos - c0 + 1 :]
                if "N" not in codon:
                    silent = CODON_TABLE[codon] == CODON_TABLE[mutated]
            (synonymous if silent else other).append((pos, base, alt))
    return synonymous, other


def build_training_set(
    catalog: list[CatalogEntry],
    references: dict[str, Sequence],
    negatives_per_positive: int = 3,
    seed: int = 0,
    genes=DEFAULT_GENES,
) -> list[LabeledExample]:
    """One positive per catalog entry followed by its seeded benign negatives.

    Negatives are single-base substitutions in the same gene that collide
    with no catalog entry and with no other negative; synonymous changes in
    the reference ORF are used first.
    """
    if negatives_per_positive < 1:
        raise ValueError("negatives_per_positive must be >= 1")
    missing = {e.gene for e in catalog} - set(references)
    if missing:
        raise KeyError(f"no reference sequence for {sorted(missing)}")
    rng = np.random.default_rng(seed)
    taken = {e.key for e in catalog}

    pools = {}
    for gene in sorted({e.gene for e in catalog}):
        syn, other = _substitution_pool(references[gene], taken, gene)
        pools[gene] = (list(syn), list(other))

    examples = []
    for entry in catalog:
        ref = references[entry.gene]
        target = np.zeros(len(genes))
        target[genes.index(entry.gene)] = 1.0
        examples.append(LabeledExample(encode(entry.gene, entry.variant, ref, len(ref), genes),
                                       target, entry.gene, entry.variant))
        syn, other = pools[entry.gene]
        for _ in range(negatives_per_positive):
            pool = syn if syn else other
            if not pool:
                raise InsufficientSpace(f"ran out of benign substitutions for {entry.gene}")
            pos, base, alt = pool.pop(int(rng.integers(len(pool))))
            v = Variant(Kind.SUBSTITUTION, pos, base, alt, Level.DNA)
            examples.append(LabeledExample(encode(entry.gene, v, ref, len(ref), genes),
                                           np.zeros(len(genes)), entry.gene, v))
    return examples


def training_set_json(examples: list[LabeledExample]) -> str:
    return json.dumps([ex.to_dict() for ex in examples], indent=1)


# -- shipped sample data ----------------------------------------------------


def sample_catalog_text() -> str:
    return resources.files("mutascan.data").joinpath("sample_catalog.tsv").read_text("utf-8")


def sample_catalog() -> list[CatalogEntry]:
    return load_catalog(sample_catalog_text())


def sample_references() -> dict[str, Sequence]:
    text = resources.files("mutascan.data").joinpath("sample_references.fa").read_text("utf-8")
    return {s.id: s for s in parse_fasta(text)}
