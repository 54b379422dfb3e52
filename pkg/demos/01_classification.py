# ---
# jupyter:
#   jupytext:
#     formats: py:percent
# ---

# %% [markdown]
# # Cyclic and multi-cyclic formulas
#
# A formula's variable multigraph has one node per variable and one edge per
# atom occurrence. It is cyclic when some component has at least as many
# edges as nodes.

# %%
from lmst import build_graph, classify, export_dot, normalize, parse, render
from lmst.cyclicity import enumerate_cyclic_occurrences

# %% [markdown]
# The subset-of-its-label predicate expands into two atoms that both link
# `w` and `z`, giving a pair of parallel edges.

# %%
f = normalize(parse("~(L z sub z)"))
print(render(f))
g = build_graph(f)
print(export_dot(g))

# %%
c = classify(f)
print(c)

# %% [markdown]
# Its cyclic occurrences are nested inside each other, so in the default
# "separate" reading it counts as cyclic but not multi-cyclic. Reading the
# definition literally (any two occurrences) flips that verdict.

# %%
for span in enumerate_cyclic_occurrences(f):
    print(span.path, render(span.formula))
print("literal:", classify(f, mode="literal").multi_cyclic)

# %% [markdown]
# Two self-loops side by side are disjoint cyclic spans.

# %%
twin = classify("(x in x) & (y in y)")
print(twin.multi_cyclic, twin.relaxed_admissible)

# %% [markdown]
# The relaxed check only objects when the disjoint spans are alpha-equivalent
# after closing over their free variables.

# %%
print(classify("(x in x) & ex u. ex v. (u in v & v in u)").relaxed_admissible)
