# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Russell's set and the X / X* confusion in finite models
#
# The canonical model on k atoms has the subsets of the atoms as elements and
# singletons as self-membered atoms. Only the label map varies.

# %%
from collections import Counter

from lmst import canonical_model, confusion_demo, ext, russell_analysis
from lmst.model import label_injections, mask_str

# %%
ident = canonical_model(2)
swap = canonical_model(2, label="swap")
print(swap.describe())

# %% [markdown]
# Under the identity every label is a subset of what it labels, so
# X = ext(~(L z sub z)) does not exist.

# %%
print(ext(ident, "~(L z sub z)", "z"))
r = russell_analysis(swap)
print(mask_str(r["X"], 2), mask_str(r["label_X"], 2), r["label_within_X"])
print(r["cover"])

# %% [markdown]
# Widening the predicate by `z = X` adds X itself, but L X is already inside
# X, so the extension does not grow.

# %%
d = confusion_demo(swap)
print(d["X"], d["X_star"], d["phi_at_X"], d["psi_at_X"])

# %% [markdown]
# Sweeping all 5,040 labelings of the 3-atom model.

# %%
tally = Counter()
for m in label_injections(3):
    r = russell_analysis(m)
    if not r["exists"]:
        tally["vacuous"] += 1
        continue
    tally["label within X"] += r["label_within_X"]
    tally["confusion confirmed"] += confusion_demo(m)["confirmed"]
print(tally)

# %% [markdown]
# Reading the subset sign as strict changes the picture: whenever L X = X the
# strict predicate holds at X, and the two predicates no longer disagree.

# %%
strict = Counter()
for m in label_injections(3):
    d = confusion_demo(m, strict=True)
    strict[(d["equal"], d["confirmed"])] += 1
print(strict)
