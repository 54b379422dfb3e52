"""Independent reference implementations used only by the tests.

None of these share code with the package paths they check: the evaluator
works on frozensets instead of bit masks and interprets defined predicates
directly, the cycle detector is a DFS over edge ids, and the stratification
oracle is a brute-force search over bounded levels.
"""

import itertools

from lmst.formula import (
    All, And, Atom, Ex, Iff, Implies, Label, Not, Or, Pred, Var, children,
)


# --- set-based evaluator ---------------------------------------------------

class SetModel:
    """Elements are frozensets of atom indices; members are singletons."""

    def __init__(self, k, with_empty, label):
        subsets = []
        for r in range(0 if with_empty else 1, k + 1):
            subsets.extend(frozenset(c) for c in itertools.combinations(range(k), r))
        self.k = k
        self.domain = subsets
        self.label = label  # dict frozenset -> frozenset

    @classmethod
    def from_model(cls, m):
        def fs(mask):
            return frozenset(i for i in range(m.k) if mask >> i & 1)
        label = {fs(a): fs(b) for a, b in zip(m.domain, m.label)}
        return cls(m.k, m.variant == "with-empty", label)

    def members(self, y):
        return [frozenset([i]) for i in sorted(y)]

    def is_member(self, a, y):
        return a in self.members(y)


def ref_term(sm, t, env):
    if isinstance(t, Var):
        return env[t.name]
    return sm.label[ref_term(sm, t.arg, env)]


def ref_eval(sm, f, env):
    if isinstance(f, Atom):
        a, b = ref_term(sm, f.left, env), ref_term(sm, f.right, env)
        return a == b if f.kind == "eq" else sm.is_member(a, b)
    if isinstance(f, Pred):
        args = [ref_term(sm, t, env) for t in f.args]
        if f.name == "sub":
            return set(sm.members(args[0])) <= set(sm.members(args[1]))
        if f.name == "psub":
            return set(sm.members(args[0])) <= set(sm.members(args[1])) and args[0] != args[1]
        if f.name == "single":
            return len(sm.members(args[0])) == 1
        raise KeyError(f.name)
    if isinstance(f, Not):
        return not ref_eval(sm, f.body, env)
    if isinstance(f, And):
        return ref_eval(sm, f.left, env) and ref_eval(sm, f.right, env)
    if isinstance(f, Or):
        return ref_eval(sm, f.left, env) or ref_eval(sm, f.right, env)
    if isinstance(f, Implies):
        return (not ref_eval(sm, f.left, env)) or ref_eval(sm, f.right, env)
    if isinstance(f, Iff):
        return ref_eval(sm, f.left, env) == ref_eval(sm, f.right, env)
    results = (ref_eval(sm, f.body, {**env, f.var: d}) for d in sm.domain)
    return all(results) if isinstance(f, All) else any(results)


def small_set_models(max_k=2):
    """Every canonical model with k <= max_k, both variants, every label bijection."""
    for k in range(1, max_k + 1):
        for with_empty in (False, True):
            base = SetModel(k, with_empty, {})
            if len(base.domain) < 2:
                continue
            for perm in itertools.permutations(base.domain):
                yield SetModel(k, with_empty, dict(zip(base.domain, perm)))


def valuations(sm, names):
    names = sorted(names)
    for values in itertools.product(sm.domain, repeat=len(names)):
        yield dict(zip(names, values))


# --- graphs ----------------------------------------------------------------

def _term_var(t):
    while isinstance(t, Label):
        t = t.arg
    return t.name


def atom_edges(f):
    """(u, v) per atom occurrence, collected by plain recursion."""
    if isinstance(f, Atom):
        return [(_term_var(f.left), _term_var(f.right))]
    out = []
    for g in children(f):
        out.extend(atom_edges(g))
    return out


def dfs_has_cycle(edges):
    """Back-edge detection on an undirected multigraph given as (u, v) pairs."""
    adj = {}
    for idx, (u, v) in enumerate(edges):
        if u == v:
            return True
        adj.setdefault(u, []).append((v, idx))
        adj.setdefault(v, []).append((u, idx))
    seen = set()
    for start in adj:
        if start in seen:
            continue
        stack = [(start, None)]
        parents = {start: None}
        while stack:
            node, via = stack.pop()
            if node in seen:
                return True
            seen.add(node)
            for nxt, idx in adj[node]:
                if idx == via:
                    continue
                if nxt in seen:
                    return True
                stack.append((nxt, idx))
    return False


def brute_cyclic_paths(f, path=()):
    """Preorder paths of subformulas whose own atoms form a cyclic multigraph."""
    out = [path] if dfs_has_cycle(atom_edges(f)) else []
    for i, g in enumerate(children(f)):
        out.extend(brute_cyclic_paths(g, path + (i,)))
    return out


# --- stratification --------------------------------------------------------

def brute_levels(f, delta=0, max_level=3):
    """First level assignment in 0..max_level satisfying every atom, or None."""
    atoms = []

    def collect(g):
        if isinstance(g, Atom):
            atoms.append(g)
        for c in children(g):
            collect(c)

    collect(f)

    def depth(t):
        d = 0
        while isinstance(t, Label):
            d, t = d + 1, t.arg
        return d, t.name

    cons = []
    names = []
    for a in atoms:
        (dl, vl), (dr, vr) = depth(a.left), depth(a.right)
        for n in (vl, vr):
            if n not in names:
                names.append(n)
        cons.append((vl, dl, vr, dr, 1 if a.kind == "in" else 0))
    for levels in itertools.product(range(max_level + 1), repeat=len(names)):
        env = dict(zip(names, levels))
        if all(env[vr] + delta * dr == env[vl] + delta * dl + w for vl, dl, vr, dr, w in cons):
            return env
    return None
