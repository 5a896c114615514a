import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutascan.align import Alignment, global_align
from mutascan.seqio import Sequence
from mutascan.translate import CODON_TABLE
from mutascan.variants import (
    CandidateVerdict,
    Kind,
    Level,
    Rationale,
    Variant,
    apply_variants,
    assess_candidate,
    call_variants,
    parse_variant,
)

from oracles import apply_edits


def dna(s, name="s"):
    return Sequence.dna(name, s)


def test_identity_has_no_variants():
    assert call_variants(Alignment("ACGT", "ACGT", 8)) == []


def test_single_substitution():
    assert call_variants(Alignment("ACGT", "AGGT", 5)) == [Variant(Kind.SUBSTITUTION, 1, "C", "G")]


def test_merging_and_positions():
    al = Alignment("AC--GTTA", "ACTTG--G", 0)
    assert call_variants(al) == [
        Variant(Kind.INSERTION, 2, "", "TT"),
        Variant(Kind.DELETION, 3, "TT", ""),
        Variant(Kind.SUBSTITUTION, 5, "A", "G"),
    ]


def test_multi_base_substitution():
    assert call_variants(Alignment("AAAA", "ACCA", 0)) == [Variant(Kind.SUBSTITUTION, 1, "AA", "CC")]


def test_reference_in_row_b():
    al = Alignment("ACGGT", "AC-GT", 0)
    assert call_variants(al, reference_is_row_a=False) == [Variant(Kind.INSERTION, 2, "", "G")]


def test_variant_invariants():
    with pytest.raises(ValueError):
        Variant(Kind.SUBSTITUTION, 0, "A", "")
    with pytest.raises(ValueError):
        Variant(Kind.INSERTION, 0, "A", "C")
    with pytest.raises(ValueError):
        Variant(Kind.DELETION, 0, "", "")
    with pytest.raises(ValueError):
        Variant(Kind.SUBSTITUTION, -1, "A", "C")


@pytest.mark.parametrize("text", ["5:A>G", "0:ins:TTA", "12:del:C", "3:AC>GT"])
def test_notation_round_trip(text):
    assert parse_variant(text).notation == text


def test_protein_notation():
    v = parse_variant("65:W>*", Level.PROTEIN)
    assert v.level is Level.PROTEIN and v.alt_allele == "*"


def test_bad_notation():
    with pytest.raises(ValueError):
        parse_variant("5-A-G")


def _mutate(rng, s):
    """Random edits in ascending order; returns (patient, edits)."""
    edits = []
    pos = 0
    while pos < len(s):
        pos += rng.randrange(1, 12)
        if pos >= len(s):
            break
        kind = rng.choice("sid")
        if kind == "s":
            alt = rng.choice([b for b in "ACGT" if b != s[pos]])
            edits.append((pos, s[pos], alt))
            pos += 1
        elif kind == "i":
            edits.append((pos, "", "".join(rng.choice("ACGT") for _ in range(rng.randrange(1, 4)))))
        else:
            L = rng.randrange(1, 4)
            edits.append((pos, s[pos : pos + L], ""))
            pos += L
    return apply_edits(s, edits), edits


@pytest.mark.parametrize("seed", range(40))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    ref = "".join(rng.choice("ACGT") for _ in range(rng.randrange(5, 80)))
    patient, _ = _mutate(rng, ref)
    if not patient:
        return
    al = global_align(dna(ref), dna(patient))
    variants = call_variants(al)
    assert apply_variants(ref, variants) == patient
    assert [v.ref_pos for v in variants] == sorted(v.ref_pos for v in variants)
    for v in variants:
        assert v.ref_pos <= len(ref)


@settings(max_examples=200, deadline=None)
@given(st.text("ACGT", min_size=1, max_size=30), st.text("ACGT", min_size=1, max_size=30))
def test_round_trip_property(a, b):
    al = global_align(dna(a), dna(b))
    assert apply_variants(a, call_variants(al)) == b
    assert apply_variants(b, call_variants(al, reference_is_row_a=False)) == a


# -- candidate rule ---------------------------------------------------------


def test_no_difference():
    v = assess_candidate(dna("ATGGGATAA"), dna("ATGGGATAA"))
    assert (v.dna_variants, v.protein_variants, v.malignant_candidate, v.rationale) == (
        [], [], False, Rationale.NO_DNA_DIFFERENCE)


def test_synonymous_is_silent():
    assert CODON_TABLE["GGA"] == CODON_TABLE["GGG"]
    v = assess_candidate(dna("ATGGGA"), dna("ATGGGG"))
    assert v.dna_variants == [Variant(Kind.SUBSTITUTION, 5, "A", "G")]
    assert v.protein_variants == []
    assert not v.malignant_candidate
    assert v.rationale is Rationale.SILENT_DNA_ONLY


def test_missense_is_candidate():
    assert (CODON_TABLE["GGA"], CODON_TABLE["CGA"]) == ("G", "R")
    v = assess_candidate(dna("ATGGGA"), dna("ATGCGA"))
    assert v.protein_variants == [Variant(Kind.SUBSTITUTION, 1, "G", "R", Level.PROTEIN)]
    assert v.malignant_candidate
    assert v.rationale is Rationale.PROTEIN_CHANGED
    assert v.dna_alignment is not None and v.protein_alignment is not None


def test_change_outside_orf_is_silent():
    ref = "CCCC" + "ATGAAACCCGGGTAA" + "CCCC"
    pat = "CGCC" + "ATGAAACCCGGGTAA" + "CCAC"
    v = assess_candidate(dna(ref), dna(pat))
    assert len(v.dna_variants) == 2
    assert v.rationale is Rationale.SILENT_DNA_ONLY


def test_upstream_indel_does_not_shift_frame():
    orf = "ATGAAACCCGGGTTTTAA"
    v = assess_candidate(dna("CCCCC" + orf), dna("CCCCCAG" + orf))
    assert v.dna_variants and not v.protein_variants


def test_explicit_frame():
    v = assess_candidate(dna("CATGGGA"), dna("CATGCGA"), frame=1)
    assert v.frame == 1
    assert v.malignant_candidate


def test_stop_gain_is_candidate():
    # TGG (W) -> TGA (stop) truncates the protein
    v = assess_candidate(dna("ATGTGGAAATAA"), dna("ATGTGAAAATAA"))
    assert v.malignant_candidate
    assert v.protein_variants[0].kind is Kind.DELETION


def test_verdict_json_round_trip():
    v = assess_candidate(dna("ATGGGAAAATAA"), dna("ATGCGAAAATAA"))
    assert CandidateVerdict.from_dict(v.to_dict()) == v


_sense = sorted(c for c, aa in CODON_TABLE.items() if aa not in "*")


def _random_orf(rng, codons):
    return "ATG" + "".join(rng.choice([c for c in _sense if c != "ATG"]) for _ in range(codons)) + "TAA"


@pytest.mark.parametrize("seed", range(30))
def test_synonymous_changes_stay_silent(seed):
    rng = random.Random(seed)
    ref = _random_orf(rng, 30)
    pat = list(ref)
    changed = 0
    for c in rng.sample(range(1, 31), 4):
        codon = ref[3 * c : 3 * c + 3]
        syn = [x for x in _sense if CODON_TABLE[x] == CODON_TABLE[codon] and x != codon]
        if syn:
            pat[3 * c : 3 * c + 3] = rng.choice(syn)
            changed += 1
    pat = "".join(pat)
    v = assess_candidate(dna(ref), dna(pat))
    assert v.rationale is (Rationale.SILENT_DNA_ONLY if changed else Rationale.NO_DNA_DIFFERENCE)
    assert not v.malignant_candidate


@pytest.mark.parametrize("seed", range(30))
def test_frameshift_changes_protein(seed):
    rng = random.Random(seed)
    ref = _random_orf(rng, 40)
    pos = rng.randrange(6, 100)
    L = rng.choice([1, 2, 4, 5])
    if rng.random() < 0.5:
        pat = ref[:pos] + ref[pos + L :]
    else:
        pat = ref[:pos] + "".join(rng.choice("ACGT") for _ in range(L)) + ref[pos:]
    v = assess_candidate(dna(ref), dna(pat))
    assert v.protein_variants
    assert v.malignant_candidate


@settings(max_examples=100, deadline=None)
@given(st.text("ACGT", min_size=6, max_size=40), st.text("ACGT", min_size=6, max_size=40))
def test_candidate_implies_dna_difference(a, b):
    ref = "ATG" + a + "TAA"
    v = assess_candidate(dna(ref), dna("ATG" + b + "TAA"))
    if v.malignant_candidate:
        assert v.dna_variants
    assert v.malignant_candidate == bool(v.protein_variants)
