# %% [markdown]
# # Global alignment with affine gaps
#
# Two short DNA fragments, aligned end to end.  A long gap costs one
# opening penalty plus a smaller charge per extra column, so the aligner
# prefers one long gap over several short ones.

# %%
from mutascan import Sequence, ScoringScheme, global_align, percent_identity, seed_scan

ref = Sequence.dna("ref", "ATGGCCAAGTTTGACCTGAAACGCTAA")
pat = Sequence.dna("patient", "ATGGCCAAGGACCTGAAACGATAA")

al = global_align(ref, pat)
print(al.to_text())
print("score", al.score, "identity %.3f" % percent_identity(al))

# %% [markdown]
# The default DNA scheme is match 2, mismatch -1, gap open -4, extend -1.
# Make gaps cheaper and the same pair aligns differently.

# %%
cheap = ScoringScheme(match=2, mismatch=-1, gap_open=-1, gap_extend=-1)
print(global_align(ref, pat, cheap).to_text())

# %% [markdown]
# Seed hits are the shared exact substrings the FASTA heuristic starts from.

# %%
for hit in seed_scan(ref, pat, k=6):
    print(hit, "diagonal", hit.diagonal)

# %% [markdown]
# Sequences longer than 10,000 residues are aligned inside a diagonal band
# around the length difference.  `band_hit` says the path touched the band
# edge, in which case a wider band might score higher.

# %%
import random

rng = random.Random(0)
long_ref = "".join(rng.choice("ACGT") for _ in range(12_000))
long_pat = long_ref[:5000] + long_ref[5010:]
big = global_align(Sequence.dna("a", long_ref), Sequence.dna("b", long_pat))
print("banded", big.banded, "band_hit", big.band_hit, "score", big.score)
