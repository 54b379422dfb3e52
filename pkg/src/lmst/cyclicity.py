"""Variable multigraphs of formulas, cyclicity and multi-cyclicity.

Every atom occurrence contributes one edge between the variables of its two
terms (a self-loop when both terms share a variable).  A formula is cyclic
when that multigraph is not a forest, and multi-cyclic when it contains two
cyclic subformula occurrences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .formula import (
    Ex, Formula, FormulaError, Pred, alpha_eq, atoms, children,
    free_vars, label_depth, normalize, parse, render, subformula, term_var,
)

__all__ = [
    "Edge", "VarGraph", "OccurrenceSpan", "Classification", "build_graph",
    "is_cyclic", "enumerate_cyclic_occurrences", "is_multi_cyclic",
    "relaxed_admissible", "classify", "classification_report", "export_dot",
    "graph_to_json",
]

MODES = ("separate", "literal")


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    occurrence: int  # index of the atom occurrence, left to right
    path: tuple
    text: str

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class VarGraph:
    nodes: tuple
    edges: tuple

    def components(self) -> list:
        """Connected components as ``(nodes, edges)`` lists, in node order."""
        parent = {n: n for n in self.nodes}

        def find(n):
            while parent[n] != n:
                parent[n] = parent[parent[n]]
                n = parent[n]
            return n

        for e in self.edges:
            ra, rb = find(e.a), find(e.b)
            if ra != rb:
                parent[rb] = ra
        groups: dict = {}
        for n in self.nodes:
            groups.setdefault(find(n), ([], []))[0].append(n)
        for e in self.edges:
            groups[find(e.a)][1].append(e)
        return list(groups.values())


@dataclass(frozen=True)
class OccurrenceSpan:
    path: tuple
    formula: Formula

    def nested_with(self, other: "OccurrenceSpan") -> bool:
        n = min(len(self.path), len(other.path))
        return self.path[:n] == other.path[:n]


@dataclass(frozen=True)
class Classification:
    acyclic: bool
    cyclic: bool
    multi_cyclic: bool
    multi_cyclic_mode: str
    relaxed_admissible: bool
    parameter_free: bool


# --- graph -----------------------------------------------------------------

def build_graph(f: Formula) -> VarGraph:
    """One edge per atom occurrence of a normalized formula."""
    nodes: dict = {}
    edges = []
    for idx, (path, atom) in enumerate(atoms(f)):
        if isinstance(atom, Pred):
            raise FormulaError(f"unexpanded predicate {atom.name!r}; normalize first")
        if label_depth(atom.left) > 1 or label_depth(atom.right) > 1:
            raise FormulaError(f"nested label term in {render(atom)!r}; flatten first")
        a, b = term_var(atom.left), term_var(atom.right)
        nodes.setdefault(a, None)
        nodes.setdefault(b, None)
        edges.append(Edge(a, b, idx, path, render(atom)))
    return VarGraph(tuple(nodes), tuple(edges))


def is_cyclic(g: VarGraph) -> bool:
    # a component is a tree iff it has exactly one edge fewer than nodes
    return any(len(es) >= len(ns) for ns, es in g.components())


def enumerate_cyclic_occurrences(f: Formula) -> list:
    """Cyclic subformula occurrences of ``f``, in preorder."""
    out = []
    stack = [()]
    while stack:
        path = stack.pop()
        g = subformula(f, path)
        if is_cyclic(build_graph(g)):
            out.append(OccurrenceSpan(path, g))
        kids = children(g)
        for i in reversed(range(len(kids))):
            stack.append(path + (i,))
    return out


def _disjoint_pairs(spans: list):
    for i, s in enumerate(spans):
        for t in spans[i + 1:]:
            if not s.nested_with(t):
                yield s, t


def is_multi_cyclic(f: Formula, mode: str = "separate") -> bool:
    """``separate``: two disjoint cyclic occurrences; ``literal``: any two."""
    spans = enumerate_cyclic_occurrences(f)
    if mode == "literal":
        return len(spans) >= 2
    if mode != "separate":
        raise ValueError(f"unknown multi-cyclic mode {mode!r}")
    return next(_disjoint_pairs(spans), None) is not None


def _closed(f: Formula) -> Formula:
    """Existentially close ``f`` over its free variables, in order of first occurrence."""
    order = []
    for _, atom in atoms(f):
        terms = atom.args if isinstance(atom, Pred) else (atom.left, atom.right)
        for t in terms:
            n = term_var(t)
            if n not in order:
                order.append(n)
    free = free_vars(f)
    for n in reversed([n for n in order if n in free]):
        f = Ex(n, f)
    return f


def occurrences_equivalent(f: Formula, g: Formula) -> bool:
    """Alpha-equivalence of two subformula occurrences.

    Variables bound outside an occurrence appear free in it, so both sides
    are closed first; ``x in x`` and ``y in y`` then compare equal.
    """
    return alpha_eq(_closed(f), _closed(g))


def relaxed_admissible(f: Formula) -> bool:
    """No two disjoint cyclic occurrences are alpha-equivalent."""
    spans = enumerate_cyclic_occurrences(f)
    return not any(occurrences_equivalent(s.formula, t.formula)
                   for s, t in _disjoint_pairs(spans))


# --- classification --------------------------------------------------------

def _prepare(f: Union[str, Formula], defs) -> tuple:
    if isinstance(f, str):
        f = parse(f, defs)
    return f, normalize(f, defs)


def classify(f: Union[str, Formula], mode: str = "separate",
             defs: Mapping = None) -> Classification:
    """Normalize ``f`` and fill in every verdict."""
    original, g = _prepare(f, defs)
    cyclic = is_cyclic(build_graph(g))
    return Classification(
        acyclic=not cyclic,
        cyclic=cyclic,
        multi_cyclic=is_multi_cyclic(g, mode),
        multi_cyclic_mode=mode,
        relaxed_admissible=relaxed_admissible(g),
        parameter_free=not free_vars(original),
    )


def classification_report(f: Union[str, Formula], defs: Mapping = None) -> dict:
    """JSON-ready report covering both multi-cyclic readings."""
    original, g = _prepare(f, defs)
    cyclic = is_cyclic(build_graph(g))
    return {
        "formula": f if isinstance(f, str) else render(original, defs),
        "normalized": render(g),
        "acyclic": not cyclic,
        "cyclic": cyclic,
        "multi_cyclic": {m: is_multi_cyclic(g, m) for m in MODES},
        "relaxed_admissible": relaxed_admissible(g),
        "parameter_free": not free_vars(original),
        "cyclic_occurrences": [list(s.path) for s in enumerate_cyclic_occurrences(g)],
    }


# --- export ----------------------------------------------------------------

def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: VarGraph, name: str = "formula") -> str:
    """Graphviz text; parallel edges and self-loops each get their own line."""
    lines = [f"graph {_dot_id(name)} {{"]
    for n in g.nodes:
        lines.append(f"  {_dot_id(n)};")
    for e in g.edges:
        label = _dot_id(e.text)
        lines.append(
            f"  {_dot_id(e.a)} -- {_dot_id(e.b)} [label={label}, id=\"e{e.occurrence}\"];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: VarGraph) -> dict:
    return {
        "nodes": list(g.nodes),
        "edges": [{"a": e.a, "b": e.b, "occurrence": e.occurrence,
                   "path": list(e.path), "atom": e.text} for e in g.edges],
        "cyclic": is_cyclic(g),
    }
