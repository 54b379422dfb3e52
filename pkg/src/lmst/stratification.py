"""Quine stratification as difference-constraint feasibility.

Each membership atom ``s in t`` demands ``level(t) = level(s) + 1`` and each
identity atom ``s = t`` demands ``level(s) = level(t)``, where a label
application shifts a term's level by ``StratConfig.delta_label``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Union

from .cyclicity import build_graph, is_cyclic
from .formula import Formula, label_depth, normalize, parse, render, subformula

__all__ = [
    "StratConfig", "TypeAssignment", "WitnessStep", "Unstratifiable",
    "stratify", "is_stratified", "constraints", "acyclic_implies_stratified_check",
]


@dataclass(frozen=True)
class StratConfig:
    delta_label: int = 0


@dataclass(frozen=True)
class TypeAssignment:
    levels: dict

    stratified = True

    def to_json(self) -> dict:
        return {"stratified": True, "levels": dict(self.levels)}


@dataclass(frozen=True)
class WitnessStep:
    atom: str
    source: str
    target: str
    offset: int


@dataclass(frozen=True)
class Unstratifiable:
    """A cycle of atoms whose level offsets do not cancel."""

    witness: tuple

    stratified = False

    @property
    def total_offset(self) -> int:
        return sum(s.offset for s in self.witness)

    def to_json(self) -> dict:
        return {
            "stratified": False,
            "witness": [
                {"atom": s.atom, "from": s.source, "to": s.target, "offset": s.offset}
                for s in self.witness
            ],
            "total_offset": self.total_offset,
        }


def constraints(f: Formula, cfg: StratConfig = StratConfig()) -> list:
    """``(a, b, w, edge)`` per atom: ``level(b) - level(a) = w``."""
    out = []
    for e in build_graph(f).edges:
        atom = subformula(f, e.path)
        w = cfg.delta_label * (label_depth(atom.left) - label_depth(atom.right))
        if atom.kind == "in":
            w += 1
        out.append((e.a, e.b, w, e))
    return out


def stratify(f: Union[str, Formula], cfg: StratConfig = StratConfig()):
    """Return a :class:`TypeAssignment` or an :class:`Unstratifiable` witness.

    Levels are propagated breadth-first from the first node of each
    component; each component is shifted so its minimum level is 0.
    """
    if isinstance(f, str):
        f = parse(f)
    f = normalize(f)
    g = build_graph(f)
    adj = {n: [] for n in g.nodes}
    for a, b, w, e in constraints(f, cfg):
        if a == b:
            if w != 0:
                return Unstratifiable((WitnessStep(e.text, a, b, w),))
            continue
        adj[a].append((b, w, e))
        adj[b].append((a, -w, e))

    levels: dict = {}
    parent: dict = {}
    for root in g.nodes:
        if root in levels:
            continue
        levels[root] = 0
        parent[root] = None
        component = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w, e in adj[u]:
                if parent[u] is not None and parent[u][1] is e:
                    continue
                if v not in levels:
                    levels[v] = levels[u] + w
                    parent[v] = (u, e, w)
                    component.append(v)
                    queue.append(v)
                elif levels[v] != levels[u] + w:
                    return Unstratifiable(_cycle(parent, u, v, w, e))
        low = min(levels[n] for n in component)
        for n in component:
            levels[n] -= low
    return TypeAssignment({n: levels[n] for n in g.nodes})


def _cycle(parent: dict, u: str, v: str, w: int, e) -> tuple:
    def up(n):
        chain = [n]
        while parent[n] is not None:
            n = parent[n][0]
            chain.append(n)
        return chain

    pu, pv = up(u), up(v)
    common = set(pu) & set(pv)
    lca = next(n for n in pu if n in common)

    down = []  # lca -> u along tree edges
    n = u
    while n != lca:
        p, edge, tw = parent[n]
        down.append(WitnessStep(edge.text, p, n, tw))
        n = p
    down.reverse()
    steps = down + [WitnessStep(e.text, u, v, w)]
    n = v
    while n != lca:
        p, edge, tw = parent[n]
        steps.append(WitnessStep(edge.text, n, p, -tw))
        n = p
    if sum(s.offset for s in steps) < 0:
        steps = [WitnessStep(s.atom, s.target, s.source, -s.offset) for s in reversed(steps)]
    return tuple(steps)


def is_stratified(f: Union[str, Formula], cfg: StratConfig = StratConfig()) -> bool:
    return stratify(f, cfg).stratified


def acyclic_implies_stratified_check(corpus: Iterable, cfg: StratConfig = StratConfig()) -> dict:
    """Tally acyclicity and stratifiability over a corpus.

    Any formula that is acyclic yet unstratifiable is listed under
    ``violations``; over a forest the constraints are always solvable, so a
    violation means a bug.
    """
    per_formula = []
    violations = []
    for item in corpus:
        f = parse(item) if isinstance(item, str) else item
        text = item if isinstance(item, str) else render(f)
        g = normalize(f)
        acyclic = not is_cyclic(build_graph(g))
        stratified = stratify(g, cfg).stratified
        per_formula.append({"formula": text, "acyclic": acyclic, "stratified": stratified})
        if acyclic and not stratified:
            violations.append(text)
    return {
        "total": len(per_formula),
        "acyclic": sum(r["acyclic"] for r in per_formula),
        "stratified": sum(r["stratified"] for r in per_formula),
        "delta_label": cfg.delta_label,
        "violations": violations,
        "per_formula": per_formula,
    }
