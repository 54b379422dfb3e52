"""Seeded random formulas for corpus experiments."""

from __future__ import annotations

import random

from .formula import All, And, Atom, Ex, Iff, Implies, Label, Not, Or, Var

__all__ = ["random_formula", "random_corpus", "VARIABLE_POOL"]

VARIABLE_POOL = ("x", "y", "z", "w", "u", "v")


def _term(rng: random.Random, names, label_prob: float, max_depth: int):
    t = Var(rng.choice(names))
    depth = 0
    while depth < max_depth and rng.random() < label_prob:
        t = Label(t)
        depth += 1
    return t


def random_formula(rng: random.Random, max_atoms: int = 6, max_vars: int = 4,
                   label_prob: float = 0.25, max_label_depth: int = 1):
    """A formula with 1..max_atoms atoms over at most ``max_vars`` variable names."""
    names = VARIABLE_POOL[:max_vars]

    def build(n: int):
        if n == 1:
            kind = "in" if rng.random() < 0.7 else "eq"
            f = Atom(kind, _term(rng, names, label_prob, max_label_depth),
                     _term(rng, names, label_prob, max_label_depth))
        else:
            split = rng.randint(1, n - 1)
            op = rng.choice((And, And, Or, Or, Implies, Iff))
            f = op(build(split), build(n - split))
        r = rng.random()
        if r < 0.15:
            f = Not(f)
        elif r < 0.45:
            f = (All if rng.random() < 0.5 else Ex)(rng.choice(names), f)
        return f

    return build(rng.randint(1, max_atoms))


def random_corpus(n: int, seed: int = 1, **kwargs) -> list:
    """``n`` formulas from ``random.Random(seed)``; identical for identical arguments."""
    rng = random.Random(seed)
    return [random_formula(rng, **kwargs) for _ in range(n)]
