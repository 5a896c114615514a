# %% [markdown]
# # Training the classifier
#
# Positives are the catalog's pathogenic variants; each is followed by three
# seeded benign substitutions from the same gene.  Every example becomes a
# 30-number feature vector, and the target marks the gene (all zeros for
# benign).
#
# The full run to MSE 1e-7 takes a few hundred thousand epochs, roughly a
# minute on one core.  Set QUICK = False to do it.

# %%
import numpy as np

from mutascan import Config, feature_layout, sample_catalog, sample_references, train_model

QUICK = True

catalog = sample_catalog()
refs = sample_references()
for e in catalog:
    print(e.gene, e.variant)

# %%
cfg = Config(mse_goal=1e-3, max_epochs=50_000) if QUICK else Config()
net, report, examples = train_model(catalog, refs, cfg)
print(len(examples), "examples,", sum(e.is_positive for e in examples), "positive")
print("layers", net.layer_sizes)
print("epochs", report.epochs_run, "final MSE %.3e" % report.final_mse, "goal met", report.goal_met)

# %% [markdown]
# What one example looks like, segment by segment.

# %%
x = examples[0].features
for name, sl in feature_layout().items():
    print(f"{name:11s}", np.round(x[sl], 3))

# %% [markdown]
# The per-epoch MSE history goes to CSV (`epoch,mse`) for plotting.

# %%
hist = report.mse_history
for epoch in (1, 10, 100, 1000, len(hist)):
    if epoch <= len(hist):
        print(epoch, "%.3e" % hist[epoch - 1])
