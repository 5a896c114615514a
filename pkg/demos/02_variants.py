# %% [markdown]
# # From DNA differences to a malignancy candidate
#
# A DNA change only counts if it changes the protein.  Silent (synonymous)
# substitutions are reported but do not make a candidate.

# %%
from mutascan import CODON_TABLE, Sequence, assess_candidate, find_orf, sample_references

ref = sample_references()["BRCA1"]
orf = find_orf(ref)
print("ORF frame", orf.frame, "start", orf.start, "end", orf.end)
print(orf.protein)

# %% [markdown]
# Codon 27..29 reads CGG (arginine).  CGA is also arginine; TGG is tryptophan.

# %%
print(ref.residues[27:30], CODON_TABLE["CGG"], CODON_TABLE["CGA"], CODON_TABLE["TGG"])

silent = Sequence.dna("silent", ref.residues[:29] + "A" + ref.residues[30:])
missense = Sequence.dna("missense", ref.residues[:27] + "T" + ref.residues[28:])

for patient in (ref, silent, missense):
    v = assess_candidate(ref, patient)
    print(f"{patient.id:10s} dna={[str(x) for x in v.dna_variants]} "
          f"protein={[str(x) for x in v.protein_variants]} -> {v.rationale.value}")

# %% [markdown]
# A one-base deletion shifts the reading frame, and everything downstream
# changes.

# %%
shifted = Sequence.dna("frameshift", ref.residues[:100] + ref.residues[101:])
v = assess_candidate(ref, shifted)
print(v.rationale.value, len(v.protein_variants), "protein variants")
print(v.protein_alignment.to_text())
