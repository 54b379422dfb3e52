"""Finite canonical models: powerset domains with an injective label map.

Elements are bit masks over ``k`` atoms.  A mask ``a`` is a member of ``Y``
iff ``a`` has exactly one bit and that bit is set in ``Y``, so singletons are
their own members and every member is a singleton.  Only the label map
varies between models.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import InitVar, dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cyclicity import is_multi_cyclic
from .formula import (
    All, And, Atom, Ex, Formula, Iff, Implies, Not, Or, Pred, expand_definitions,
    free_vars, normalize, parse, render,
)

__all__ = [
    "VARIANTS", "ModelError", "SemanticError", "InapplicableError",
    "InfeasibleError", "UnboundVariableError", "Model", "canonical_model",
    "atom_permutation_label", "model_from_json", "evaluate", "satisfiers",
    "ext", "AXIOMS", "Verdict", "AxiomReport", "check_axioms",
    "Scheme7Report", "check_scheme7", "russell_analysis", "confusion_demo",
    "search_labels", "label_injections", "GOALS", "mask_str",
]

VARIANTS = ("no-empty", "with-empty")
MAX_ENUMERATION_ATOMS = 3
MAX_ATOMS = 4


class ModelError(ValueError):
    """An invalid model description."""


class SemanticError(Exception):
    """A well-formed request that cannot be carried out in the given model."""


class InapplicableError(SemanticError):
    pass


class InfeasibleError(SemanticError):
    pass


class UnboundVariableError(ValueError):
    pass


def mask_str(mask: Optional[int], k: int) -> str:
    """``{a,b}``-style rendering of a mask; atoms are named a, b, c, ..."""
    if mask is None:
        return "absent"
    names = [chr(ord("a") + i) if k <= 26 else f"a{i}" for i in range(k)]
    return "{" + ",".join(names[i] for i in range(k) if mask >> i & 1) + "}"


@dataclass(frozen=True)
class Model:
    """A canonical model.

    ``label[i]`` is the label of ``domain[i]``.  Pass ``check=False`` only to
    build deliberately broken models for testing the axiom checker.
    """

    k: int
    variant: str
    label: tuple
    check: InitVar[bool] = True
    _image: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self, check):
        if self.variant not in VARIANTS:
            raise ModelError(f"unknown variant {self.variant!r}")
        if self.k < 1:
            raise ModelError("a model needs at least one atom")
        if len(self.label) != len(self.domain):
            raise ModelError(
                f"label table has {len(self.label)} entries for {len(self.domain)} elements"
            )
        if check:
            if len(self.domain) < 2:
                raise ModelError("a single-element domain cannot hold two distinct sets")
            allowed = set(self.domain)
            for src, dst in zip(self.domain, self.label):
                if dst not in allowed:
                    raise ModelError(f"label of {src} is {dst}, outside the domain")
            if len(set(self.label)) != len(self.label):
                raise ModelError("label map is not injective")
        object.__setattr__(self, "_image", dict(zip(self.domain, self.label)))

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    @property
    def domain(self) -> tuple:
        start = 1 if self.variant == "no-empty" else 0
        return tuple(range(start, 1 << self.k))

    @property
    def singletons(self) -> tuple:
        return tuple(1 << i for i in range(self.k))

    def L(self, mask: int) -> int:
        return self._image[mask]

    def member(self, a: int, y: int) -> bool:
        return a != 0 and a & (a - 1) == 0 and a & y != 0

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "variant": self.variant,
            "label": [[src, dst] for src, dst in zip(self.domain, self.label)],
        }

    def describe(self) -> str:
        return ", ".join(
            f"{mask_str(s, self.k)}->{mask_str(d, self.k)}"
            for s, d in zip(self.domain, self.label)
        )


def atom_permutation_label(k: int, perm: Sequence[int]) -> dict:
    """The label map induced on masks by permuting atoms (atom ``i`` -> ``perm[i]``)."""
    if sorted(perm) != list(range(k)):
        raise ModelError(f"{list(perm)} is not a permutation of 0..{k - 1}")
    table = {}
    for mask in range(1 << k):
        table[mask] = sum(1 << perm[i] for i in range(k) if mask >> i & 1)
    return table


def _label_table(k: int, spec) -> dict:
    if isinstance(spec, str):
        if spec == "identity":
            return {m: m for m in range(1 << k)}
        if spec == "swap":
            if k < 2:
                raise ModelError("swap needs at least two atoms")
            return atom_permutation_label(k, [1, 0] + list(range(2, k)))
        if spec.startswith("atoms:"):
            try:
                perm = [int(p) for p in spec[len("atoms:"):].split(",")]
            except ValueError:
                raise ModelError(f"bad atom permutation {spec!r}") from None
            return atom_permutation_label(k, perm)
        raise ModelError(f"unknown label spec {spec!r}")
    if isinstance(spec, Mapping):
        return {int(a): int(b) for a, b in spec.items()}
    return {int(a): int(b) for a, b in spec}


def canonical_model(k: int, variant: str = "no-empty", label="identity") -> Model:
    """Build the canonical model on ``k`` atoms.

    ``label`` is ``"identity"``, ``"swap"`` (exchange atoms 0 and 1),
    ``"atoms:p0,p1,..."`` (an atom permutation), or an explicit table given
    as a mapping or as ``[mask_in, mask_out]`` pairs.
    """
    if variant not in VARIANTS:
        raise ModelError(f"unknown variant {variant!r}")
    if k < 1:
        raise ModelError("k must be at least 1")
    if k == 1 and variant == "no-empty":
        raise ModelError("k = 1 without the empty set leaves a single element")
    start = 1 if variant == "no-empty" else 0
    domain = range(start, 1 << k)
    table = _label_table(k, label)
    if isinstance(label, str):
        table = {m: table[m] for m in domain}
    missing = [m for m in domain if m not in table]
    if missing:
        raise ModelError(f"label table has no entry for {missing}")
    extra = [m for m in table if m not in domain]
    if extra:
        raise ModelError(f"label table mentions {extra}, outside the domain")
    return Model(k, variant, tuple(table[m] for m in domain))


def model_from_json(data: Mapping) -> Model:
    """Inverse of :meth:`Model.to_json`; injectivity is re-checked."""
    try:
        k, variant, pairs = int(data["k"]), data["variant"], data["label"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model description: {exc}") from None
    seen = [int(p[0]) for p in pairs]
    if len(set(seen)) != len(seen):
        raise ModelError("label table lists an element twice")
    return canonical_model(k, variant, pairs)


# --- evaluation ------------------------------------------------------------

def _compile_term(t):
    depth = 0
    while not hasattr(t, "name"):
        depth += 1
        t = t.arg
    name = t.name
    if depth == 0:
        return lambda m, env: env[name]

    def term(m, env):
        v = env[name]
        for _ in range(depth):
            v = m._image[v]
        return v

    return term


@lru_cache(maxsize=4096)
def _compile(f: Formula):
    if isinstance(f, Atom):
        lt, rt = _compile_term(f.left), _compile_term(f.right)
        if f.kind == "eq":
            return lambda m, env: lt(m, env) == rt(m, env)

        def member(m, env):
            a = lt(m, env)
            return a != 0 and a & (a - 1) == 0 and a & rt(m, env) != 0

        return member
    if isinstance(f, Pred):
        raise ValueError("expand definitions before compiling")
    if isinstance(f, Not):
        body = _compile(f.body)
        return lambda m, env: not body(m, env)
    if isinstance(f, (And, Or, Implies, Iff)):
        left, right = _compile(f.left), _compile(f.right)
        if isinstance(f, And):
            return lambda m, env: left(m, env) and right(m, env)
        if isinstance(f, Or):
            return lambda m, env: left(m, env) or right(m, env)
        if isinstance(f, Implies):
            return lambda m, env: (not left(m, env)) or right(m, env)
        return lambda m, env: left(m, env) == right(m, env)
    body = _compile(f.body)
    var = f.var
    want_all = isinstance(f, All)

    def quant(m, env):
        saved = env.get(var, _MISSING)
        try:
            for d in m.domain:
                env[var] = d
                if body(m, env) != want_all:
                    return not want_all
            return want_all
        finally:
            if saved is _MISSING:
                env.pop(var, None)
            else:
                env[var] = saved

    return quant


_MISSING = object()


@lru_cache(maxsize=4096)
def _primitive(f: Formula) -> Formula:
    return expand_definitions(f)


def _as_formula(f: Union[str, Formula]) -> Formula:
    return parse(f) if isinstance(f, str) else f


def evaluate(m: Model, f: Union[str, Formula], v: Mapping = None) -> bool:
    """Truth value of ``f`` in ``m`` under valuation ``v`` (variable -> mask)."""
    f = _primitive(_as_formula(f))
    env = dict(v or {})
    missing = free_vars(f) - env.keys()
    if missing:
        raise UnboundVariableError(f"no value for free variable(s) {sorted(missing)}")
    dom = set(m.domain)
    for name, val in env.items():
        if val not in dom:
            raise ValueError(f"{name} = {val} is not an element of the domain")
    return bool(_compile(f)(m, env))


def satisfiers(m: Model, phi: Union[str, Formula], var: str, params: Mapping = None) -> tuple:
    """Domain elements ``y`` with ``phi(y)`` true."""
    phi = _primitive(_as_formula(phi))
    env = dict(params or {})
    missing = free_vars(phi) - {var} - env.keys()
    if missing:
        raise UnboundVariableError(f"no value for parameter(s) {sorted(missing)}")
    fn = _compile(phi)
    out = []
    for y in m.domain:
        env[var] = y
        if fn(m, env):
            out.append(y)
    return tuple(out)


def ext(m: Model, phi: Union[str, Formula], var: str, params: Mapping = None,
        parameter_free: bool = False) -> Optional[int]:
    """The object extension of ``phi``: the union of the labels of its satisfiers.

    Returns ``None`` when that union is empty in the no-empty variant (the
    set does not exist there).
    """
    phi = _as_formula(phi)
    if parameter_free and free_vars(phi) - {var}:
        raise UnboundVariableError(
            f"predicate has parameters {sorted(free_vars(phi) - {var})}"
        )
    union = 0
    for y in satisfiers(m, phi, var, params):
        union |= m.L(y)
    if union == 0 and m.variant == "no-empty":
        return None
    return union


# --- axioms ----------------------------------------------------------------

AXIOMS = {
    "1": "all x. all y. (all z. (z in x <-> z in y)) -> x = y",
    "2": "all x. ex w. w in x",
    "3": "all x. single(x) -> x in x",
    "4": "all x. all y. x in y -> single(x)",
    "6": "all x. all y. ~(x = y) -> ~(L x = L y)",
    "8": "ex x. ex y. ~(x = y)",
}


@dataclass(frozen=True)
class Verdict:
    status: str  # "holds", "fails" or "skipped"
    witness: Optional[dict] = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fails"

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


def _counterexample(m: Model, f: Formula) -> Optional[dict]:
    """Search the leading universal block of ``f`` for a falsifying valuation."""
    names = []
    body = f
    while isinstance(body, All):
        names.append(body.var)
        body = body.body
    if not names:
        return None if evaluate(m, f) else {}
    for values in itertools.product(m.domain, repeat=len(names)):
        v = dict(zip(names, values))
        if not evaluate(m, body, v):
            return v
    return None


def _check_axiom(m: Model, number: str) -> Verdict:
    if number == "2" and m.variant == "with-empty":
        return Verdict("skipped", note="dropped when the empty set is admitted")
    f = parse(AXIOMS[number])
    if number == "8":
        if evaluate(m, f):
            return Verdict("holds")
        return Verdict("fails", {"domain": list(m.domain)}, "fewer than two elements")
    w = _counterexample(m, f)
    return Verdict("holds") if w is None else Verdict("fails", w)


def designated_variable(f: Formula) -> Optional[str]:
    """The sole free variable of a corpus formula (``None`` if closed).

    Raises ``ValueError`` when there are several.
    """
    fv = sorted(free_vars(f))
    if len(fv) > 1:
        raise ValueError(f"formula has parameters: free variables {fv}")
    return fv[0] if fv else None


def _scheme5(m: Model, f: Formula, text: str) -> dict:
    try:
        var = designated_variable(f)
    except ValueError as exc:
        return {"formula": text, "status": "skipped", "note": str(exc)}
    var = var or "z"
    good = [s for s in m.singletons if s in satisfiers(m, f, var)]
    collected = 0
    for s in good:
        collected |= s
    row = {"formula": text, "variable": var, "set": collected}
    if not good and m.variant == "no-empty":
        row.update(status="holds", note="no singleton satisfies the formula")
        return row
    if collected not in m.domain:
        row.update(status="fails", witness={"missing": collected})
        return row
    for x in m.domain:
        expected = x in good
        if m.member(x, collected) != expected:
            row.update(status="fails", witness={"x": x})
            return row
    row["status"] = "holds"
    return row


@dataclass(frozen=True)
class Scheme7Report:
    violations: tuple
    out_of_scheme: tuple
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "violations": list(self.violations),
            "out_of_scheme": list(self.out_of_scheme),
        }


@dataclass(frozen=True)
class AxiomReport:
    verdicts: dict
    scheme5: tuple
    scheme7: Scheme7Report

    @property
    def ok(self) -> bool:
        return (all(v.ok for v in self.verdicts.values())
                and all(r["status"] != "fails" for r in self.scheme5)
                and self.scheme7.ok)

    def to_json(self) -> dict:
        return {
            "holds": self.ok,
            "axioms": {n: v.to_json() for n, v in self.verdicts.items()},
            "scheme5": list(self.scheme5),
            "scheme7": self.scheme7.to_json(),
        }


def _corpus_items(corpus: Iterable) -> list:
    out = []
    for item in corpus:
        f = _as_formula(item)
        out.append((f, item if isinstance(item, str) else render(f)))
    return out


def check_axioms(m: Model, corpus: Iterable = ()) -> AxiomReport:
    """Check axioms 1-4, 6 and 8 exhaustively and schemes 5 and 7 on ``corpus``."""
    items = _corpus_items(corpus)
    verdicts = {n: _check_axiom(m, n) for n in AXIOMS}
    verdicts = {n: verdicts[n] for n in sorted(verdicts, key=int)}
    scheme5 = tuple(_scheme5(m, f, text) for f, text in items)
    return AxiomReport(verdicts, scheme5, check_scheme7(m, [f for f, _ in items]))


def check_scheme7(m: Model, corpus: Iterable) -> Scheme7Report:
    """Pairs of in-scheme formulas with equal extensions but different truth sets.

    A formula is in the scheme when it has at most one free variable and is
    not multi-cyclic in the separate reading; others are listed as out of
    scheme and never produce violations.
    """
    inside = []
    skipped = []
    for f, text in _corpus_items(corpus):
        try:
            var = designated_variable(f)
        except ValueError as exc:
            skipped.append({"formula": text, "reason": f"not parameter free ({exc})"})
            continue
        if is_multi_cyclic(normalize(f), "separate"):
            skipped.append({"formula": text, "reason": "multi-cyclic"})
            continue
        var = var or "z"
        truth = frozenset(satisfiers(m, f, var))
        inside.append((text, var, truth, ext(m, f, var)))

    violations = []
    pairs = 0
    for (t1, _, s1, e1), (t2, _, s2, e2) in itertools.combinations(inside, 2):
        pairs += 1
        if e1 == e2 and s1 != s2:
            y = min(s1 ^ s2)
            violations.append({
                "phi": t1, "pi": t2, "extension": e1, "witness": y,
                "phi_holds": y in s1, "pi_holds": y in s2,
            })
    return Scheme7Report(tuple(violations), tuple(skipped), pairs)


# --- paradox analyses ------------------------------------------------------

def _russell_predicate(relation: str, strict: bool) -> str:
    if relation == "subset":
        return "~(L z psub z)" if strict else "~(L z sub z)"
    if relation == "membership":
        return "~(L z in z)"
    raise ValueError(f"unknown relation {relation!r}")


def russell_analysis(m: Model, relation: str = "subset", strict: bool = False) -> dict:
    """Compute X, the union of labels not included in (or not members of) what they label.

    When X exists the report records whether X itself satisfies the defining
    predicate, whether ``L X`` lies inside X, and which qualifying labels
    cover each atom of ``L X``.
    """
    pred = _russell_predicate(relation, strict)
    qualifying = satisfiers(m, pred, "z")
    x = ext(m, pred, "z")
    report = {
        "relation": relation,
        "strict": strict,
        "predicate": pred,
        "qualifying": [{"z": z, "label": m.L(z)} for z in qualifying],
        "X": x,
        "exists": x is not None,
    }
    if x is None:
        report.update(vacuous=True, resolution_holds=True)
        return report
    lx = m.L(x)
    within = lx & ~x == 0
    satisfies = evaluate(m, pred, {"z": x})
    cover = []
    for i in range(m.k):
        bit = 1 << i
        if lx & bit:
            cover.append({"atom": bit, "covered_by": [z for z in qualifying if m.L(z) & bit]})
    # X contains the label of every qualifying set, so X qualifying forces L X inside X
    consistent = (not satisfies) or within
    report.update(
        vacuous=False,
        label_X=lx,
        label_within_X=within,
        X_satisfies_predicate=satisfies,
        cover=cover,
        resolution_holds=within if relation == "subset" else consistent,
    )
    return report


def confusion_demo(m: Model, strict: bool = False) -> dict:
    """Compare X with X*, the extension of the predicate widened by ``z = X``.

    Raises :class:`InapplicableError` when X does not exist.
    """
    phi = "~(L z psub z)" if strict else "~(L z sub z)"
    psi = f"{phi} | z = X"
    x = ext(m, phi, "z")
    if x is None:
        raise InapplicableError("demo inapplicable: X does not exist in this model")
    x_star = ext(m, psi, "z", params={"X": x})
    phi_at_x = evaluate(m, phi, {"z": x})
    psi_at_x = evaluate(m, psi, {"z": x, "X": x})
    return {
        "strict": strict,
        "phi": phi,
        "psi": psi,
        "X": x,
        "X_star": x_star,
        "equal": x == x_star,
        "phi_at_X": phi_at_x,
        "psi_at_X": psi_at_x,
        "predicates_differ": phi_at_x != psi_at_x,
        "witness": {"z": x, "X": x},
        "confirmed": x == x_star and phi_at_x != psi_at_x,
    }


# --- search ----------------------------------------------------------------

GOALS = ("russell-nonvacuous", "scheme7-violation", "formula")


def label_injections(k: int, variant: str = "no-empty", sample: int = None, seed: int = 0):
    """Yield models for every label bijection, in lexicographic table order.

    With ``sample``, yield that many bijections drawn with a seeded RNG
    instead (needed for k = 4).
    """
    if variant not in VARIANTS:
        raise ModelError(f"unknown variant {variant!r}")
    if k > MAX_ATOMS:
        raise InfeasibleError(f"k = {k} is too large; at most {MAX_ATOMS} atoms are supported")
    domain = tuple(range(1 if variant == "no-empty" else 0, 1 << k))
    if sample is None:
        if k > MAX_ENUMERATION_ATOMS:
            raise InfeasibleError(
                f"enumerating all labelings for k = {k} is infeasible; pass a sample size"
            )
        for table in itertools.permutations(domain):
            yield Model(k, variant, table)
        return
    rng = random.Random(seed)
    for _ in range(sample):
        table = list(domain)
        rng.shuffle(table)
        yield Model(k, variant, tuple(table))


def search_labels(k: int, variant: str = "no-empty", goal: str = "russell-nonvacuous",
                  limit: int = 1, corpus: Iterable = (), formula: str = None,
                  sample: int = None, seed: int = 0) -> list:
    """Up to ``limit`` labeled models meeting ``goal``, in enumeration order."""
    if goal not in GOALS:
        raise ValueError(f"unknown goal {goal!r}; choose from {', '.join(GOALS)}")
    if goal == "formula":
        if formula is None:
            raise ValueError("goal 'formula' needs a formula")
        target = _as_formula(formula)
        if free_vars(target):
            raise ValueError("goal formula must be closed")
    items = [f for f, _ in _corpus_items(corpus)]

    def hit(m: Model) -> bool:
        if goal == "russell-nonvacuous":
            return ext(m, "~(L z sub z)", "z") is not None
        if goal == "scheme7-violation":
            return not check_scheme7(m, items).ok
        return evaluate(m, target)

    found = []
    for m in label_injections(k, variant, sample, seed):
        if len(found) >= limit:
            break
        if hit(m):
            found.append(m)
    return found
