# %% [markdown]
# # Screening a patient
#
# The patient carries the catalog's 4th BRCA1 mutation.  The pipeline finds
# the protein change, matches it to the catalog and also asks the network.
# Either is enough for an Abnormal verdict.

# %%
from mutascan import Config, Sequence, apply_variants, predict, sample_catalog, sample_references, train_model

catalog = sample_catalog()
refs = sample_references()
net, _, _ = train_model(catalog, refs, Config(mse_goal=1e-3, max_epochs=50_000))

ref = refs["BRCA1"]
fourth = [e for e in catalog if e.gene == "BRCA1"][3]
patient = Sequence.dna("patient", apply_variants(ref.residues, [fourth.variant]))

report = predict(ref, patient, net, catalog)
print(report.summary())

# %% [markdown]
# Same patient without the mutation: no DNA difference, so the network is
# never consulted and the report carries no prediction block.

# %%
clean = predict(ref, Sequence.dna("patient", ref.residues), net, catalog)
print(clean.summary())
print("prediction:", clean.prediction)

# %% [markdown]
# The JSON report holds the config snapshot needed to rerun it.

# %%
print(report.to_json()[:600], "...")
