# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Extension collisions
#
# The extensional paralleling axiom asks that equal object extensions imply
# equivalent predicates. In a finite canonical model this is easy to break.

# %%
from lmst import canonical_model, check_scheme7, ext
from lmst.corpus import bundled_corpus
from lmst.model import label_injections, satisfiers

# %% [markdown]
# `z = z` and `z in z` both cover every atom through their labels, since the
# label is a bijection and the singletons already reach all atoms.

# %%
for m in label_injections(2):
    print(m.describe(), ext(m, "z = z", "z"), ext(m, "z in z", "z"))

# %%
print(check_scheme7(canonical_model(2), ["z = z", "z in z"]).violations)

# %% [markdown]
# The bundled corpus keeps only formulas whose truth does not depend on z in
# the 2-atom models, so no pair can collide.

# %%
corpus = [t for _, t, _ in bundled_corpus("scheme7")]
for m in label_injections(2):
    print(len(check_scheme7(m, corpus).violations), end=" ")
print()
for text in corpus:
    print(f"{text:24} {satisfiers(canonical_model(2, label='swap'), text, 'z')}")

# %% [markdown]
# The X* predicate carries the parameter X, so it sits outside the scheme.

# %%
r = check_scheme7(canonical_model(2, label="swap"), corpus + ["~(L z sub z) | z = X"])
print(r.out_of_scheme)
