"""Formulas of the labeled mereological language: ``=``, ``in`` and the label ``L``.

The surface syntax is plain ASCII::

    term := ident | "L" term
    atom := term "=" term | term "in" term | term "sub" term
          | term "psub" term | name "(" term {"," term} ")"
    fml  := atom | "~" fml | fml "&" fml | fml "|" fml | fml "->" fml
          | fml "<->" fml | "all" ident "." fml | "ex" ident "." fml
          | "(" fml ")"

``~`` binds tightest, then ``&``, ``|``, ``->``, ``<->``.  ``&`` and ``|`` are
left-associative, ``->`` and ``<->`` right-associative, and a quantifier's
scope extends as far right as possible.

Defined predicates (``sub``, ``psub``, ``single``) parse to :class:`Pred`
nodes and are reduced to primitives by :func:`expand_definitions`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union

__all__ = [
    "Var", "Label", "Term", "Atom", "Pred", "Not", "And", "Or", "Implies",
    "Iff", "All", "Ex", "Formula", "Binary", "Quantifier", "Definition",
    "DEFAULT_DEFINITIONS", "FormulaError", "ParseError",
    "UnknownPredicateError", "parse", "render", "expand_definitions",
    "flatten_terms", "rename_apart", "normalize", "free_vars", "all_vars",
    "alpha_eq", "children", "subformula", "atoms", "label_depth",
    "term_var", "to_json", "from_json", "conj", "make_definition",
]


class FormulaError(ValueError):
    """Base class for malformed formulas and failed formula transformations."""


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownPredicateError(ParseError):
    pass


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Label:
    arg: "Term"


Term = Union[Var, Label]


def label_depth(t: Term) -> int:
    depth = 0
    while isinstance(t, Label):
        depth += 1
        t = t.arg
    return depth


def term_var(t: Term) -> str:
    """The variable at the bottom of a label chain."""
    while isinstance(t, Label):
        t = t.arg
    return t.name


def _map_term(t: Term, fn: Callable[[str], Term]) -> Term:
    if isinstance(t, Var):
        return fn(t.name)
    return Label(_map_term(t.arg, fn))


# --- formulas --------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    kind: str  # "eq" or "in"
    left: Term
    right: Term

    def __post_init__(self):
        if self.kind not in ("eq", "in"):
            raise FormulaError(f"unknown atom kind {self.kind!r}")


@dataclass(frozen=True)
class Pred:
    """An application of a defined predicate, pending expansion."""

    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Binary:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And(Binary):
    pass


@dataclass(frozen=True)
class Or(Binary):
    pass


@dataclass(frozen=True)
class Implies(Binary):
    pass


@dataclass(frozen=True)
class Iff(Binary):
    pass


@dataclass(frozen=True)
class Quantifier:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class All(Quantifier):
    pass


@dataclass(frozen=True)
class Ex(Quantifier):
    pass


Formula = Union[Atom, Pred, Not, And, Or, Implies, Iff, All, Ex]

_BINARY_OPS = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
# larger binds tighter
_PRECEDENCE = {And: 4, Or: 3, Implies: 2, Iff: 1}
_RIGHT_ASSOC = (Implies, Iff)


def children(f: Formula) -> tuple:
    """Immediate subformulas, in path-index order."""
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, Binary):
        return (f.left, f.right)
    if isinstance(f, Quantifier):
        return (f.body,)
    return ()


def _rebuild(f: Formula, kids: tuple) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, Binary):
        return type(f)(kids[0], kids[1])
    if isinstance(f, Quantifier):
        return type(f)(f.var, kids[0])
    return f


def subformula(f: Formula, path) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def atoms(f: Formula) -> Iterator[tuple]:
    """Yield ``(path, atom)`` for every atom occurrence, left to right."""
    stack = [((), f)]
    while stack:
        path, g = stack.pop()
        if isinstance(g, (Atom, Pred)):
            yield path, g
            continue
        kids = children(g)
        for i in reversed(range(len(kids))):
            stack.append((path + (i,), kids[i]))


def conj(parts) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# --- definitions -----------------------------------------------------------

@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple
    template: Formula
    infix: bool = False

    @property
    def arity(self) -> int:
        return len(self.params)


def make_definition(name: str, params, template: str, infix: bool = False) -> Definition:
    params = tuple(params)
    if infix and len(params) != 2:
        raise FormulaError("infix definitions must be binary")
    body = parse(template, defs={})
    extra = free_vars(body) - set(params)
    if extra:
        raise FormulaError(f"template for {name} has stray free variables {sorted(extra)}")
    return Definition(name, params, body, infix)


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<sym><->|->|[~&|().,=])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
)
_KEYWORDS = {"L", "in", "all", "ex"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "sym", "ident" or "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, defs: Mapping[str, Definition]):
        self.toks = _tokenize(text)
        self.i = 0
        self.defs = defs
        self.infix = {n for n, d in defs.items() if d.infix}

    def peek(self, offset: int = 0) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, message: str, tok: _Tok = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.peek().text != text or self.peek().kind == "eof":
            self.fail(f"expected {text!r}")
        return self.advance()

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.text == text

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            self.fail("unexpected trailing input")
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.at("<->"):
            self.advance()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.advance()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "~":
            self.advance()
            return Not(self.unary())
        if tok.kind == "ident" and tok.text in ("all", "ex"):
            self.advance()
            var = self.ident()
            self.expect(".")
            body = self.iff()
            return All(var, body) if tok.text == "all" else Ex(var, body)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            f = self.iff()
            self.expect(")")
            return f
        return self.atom()

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("expected a variable")
        if tok.text in _KEYWORDS or tok.text in self.infix:
            self.fail(f"reserved word {tok.text!r} cannot be a variable")
        self.advance()
        return tok.text

    def term(self) -> Term:
        if self.peek().kind == "ident" and self.peek().text == "L":
            self.advance()
            return Label(self.term())
        return Var(self.ident())

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and self.peek(1).text == "(" and self.peek(1).kind == "sym":
            return self.call()
        left = self.term()
        op = self.peek()
        if op.kind == "sym" and op.text == "=":
            self.advance()
            return Atom("eq", left, self.term())
        if op.kind == "ident" and op.text == "in":
            self.advance()
            return Atom("in", left, self.term())
        if op.kind == "ident" and op.text in self.infix:
            self.advance()
            return Pred(op.text, (left, self.term()))
        if op.kind == "ident" and op.text not in _KEYWORDS:
            raise UnknownPredicateError(f"unknown predicate {op.text!r}", op.line, op.col)
        self.fail("expected '=', 'in' or a predicate")

    def call(self) -> Formula:
        name_tok = self.advance()
        d = self.defs.get(name_tok.text)
        if d is None:
            raise UnknownPredicateError(
                f"unknown predicate {name_tok.text!r}", name_tok.line, name_tok.col
            )
        self.expect("(")
        args = [self.term()]
        while self.at(","):
            self.advance()
            args.append(self.term())
        self.expect(")")
        if len(args) != d.arity:
            raise ParseError(
                f"{d.name} takes {d.arity} argument(s), got {len(args)}",
                name_tok.line, name_tok.col,
            )
        return Pred(d.name, tuple(args))


def parse(text: str, defs: Mapping[str, Definition] = None) -> Formula:
    """Parse ``text`` into a formula.

    Raises :class:`ParseError` (with line and column) on malformed input and
    :class:`UnknownPredicateError` for predicate names missing from ``defs``.
    """
    if defs is None:
        defs = DEFAULT_DEFINITIONS
    return _Parser(text, defs).parse()


# --- rendering -------------------------------------------------------------

def _render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return "L " + _render_term(t.arg)


def render(f: Formula, defs: Mapping[str, Definition] = None) -> str:
    """Render ``f`` so that ``parse(render(f)) == f``."""
    if defs is None:
        defs = DEFAULT_DEFINITIONS
    if isinstance(f, Atom):
        op = "=" if f.kind == "eq" else "in"
        return f"{_render_term(f.left)} {op} {_render_term(f.right)}"
    if isinstance(f, Pred):
        d = defs.get(f.name)
        if d is not None and d.infix:
            return f"{_render_term(f.args[0])} {f.name} {_render_term(f.args[1])}"
        return f"{f.name}({', '.join(_render_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"~({render(f.body, defs)})"
    if isinstance(f, Quantifier):
        q = "all" if isinstance(f, All) else "ex"
        return f"{q} {f.var}. {render(f.body, defs)}"
    cls = type(f)
    prec = _PRECEDENCE[cls]

    def side(g: Formula, is_left: bool) -> str:
        text = render(g, defs)
        if isinstance(g, Quantifier):
            return f"({text})"
        if isinstance(g, Binary):
            gp = _PRECEDENCE[type(g)]
            same_side_ok = (cls in _RIGHT_ASSOC) != is_left
            if gp < prec or (gp == prec and not same_side_ok):
                return f"({text})"
        return text

    return f"{side(f.left, True)} {_BINARY_OPS[cls]} {side(f.right, False)}"


# --- variables -------------------------------------------------------------

def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset((term_var(f.left), term_var(f.right)))
    if isinstance(f, Pred):
        return frozenset(term_var(a) for a in f.args)
    if isinstance(f, Quantifier):
        return free_vars(f.body) - {f.var}
    out = frozenset()
    for g in children(f):
        out |= free_vars(g)
    return out


def all_vars(f: Formula) -> set:
    """Every variable name occurring in ``f``, bound or free, binders included."""
    out = set()
    for g in _walk(f):
        if isinstance(g, Atom):
            out.update((term_var(g.left), term_var(g.right)))
        elif isinstance(g, Pred):
            out.update(term_var(a) for a in g.args)
        elif isinstance(g, Quantifier):
            out.add(g.var)
    return out


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


class _Fresh:
    """Supplies unused names: the hint itself, else ``base``, ``base1``, ``base2``, ..."""

    def __init__(self, used):
        self.used = set(used)

    def __call__(self, hint: str) -> str:
        if hint not in self.used:
            self.used.add(hint)
            return hint
        base = hint.rstrip("0123456789") or hint
        if base not in self.used:
            self.used.add(base)
            return base
        i = 1
        while f"{base}{i}" in self.used:
            i += 1
        name = f"{base}{i}"
        self.used.add(name)
        return name


def _substitute(f: Formula, env: Mapping[str, Term]) -> Formula:
    """Replace free occurrences of variables by terms.

    Callers guarantee that no binder of ``f`` captures a variable of the
    substituted terms.
    """
    def term(t: Term) -> Term:
        return _map_term(t, lambda n: env.get(n, Var(n)))

    if isinstance(f, Atom):
        return Atom(f.kind, term(f.left), term(f.right))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(term(a) for a in f.args))
    if isinstance(f, Quantifier):
        inner = {k: v for k, v in env.items() if k != f.var}
        return type(f)(f.var, _substitute(f.body, inner))
    return _rebuild(f, tuple(_substitute(g, env) for g in children(f)))


def rename_apart(f: Formula) -> Formula:
    """Give every binder a distinct name, distinct from all free variables.

    Binders keep their name when it is still available; otherwise the base
    name gets the smallest numeric suffix not in use (``x`` -> ``x1``).
    """
    fresh = _Fresh(free_vars(f))

    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, (Atom, Pred)):
            return _substitute(g, {k: Var(v) for k, v in env.items()})
        if isinstance(g, Quantifier):
            new = fresh(g.var)
            return type(g)(new, go(g.body, {**env, g.var: new}))
        return _rebuild(g, tuple(go(c, env) for c in children(g)))

    return go(f, {})


def alpha_eq(f: Formula, g: Formula) -> bool:
    """True iff ``f`` and ``g`` differ only by a consistent renaming of bound variables."""

    def term_eq(s: Term, t: Term, ef: dict, eg: dict) -> bool:
        if label_depth(s) != label_depth(t):
            return False
        a, b = term_var(s), term_var(t)
        if a in ef or b in eg:
            return ef.get(a) == eg.get(b)
        return a == b

    def go(a: Formula, b: Formula, ef: dict, eg: dict, depth: int) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, Atom):
            return (a.kind == b.kind and term_eq(a.left, b.left, ef, eg)
                    and term_eq(a.right, b.right, ef, eg))
        if isinstance(a, Pred):
            return (a.name == b.name and len(a.args) == len(b.args)
                    and all(term_eq(s, t, ef, eg) for s, t in zip(a.args, b.args)))
        if isinstance(a, Quantifier):
            return go(a.body, b.body, {**ef, a.var: depth}, {**eg, b.var: depth}, depth + 1)
        return all(go(x, y, ef, eg, depth) for x, y in zip(children(a), children(b)))

    return go(f, g, {}, {}, 0)


# --- definition expansion and term flattening ------------------------------

def expand_definitions(f: Formula, defs: Mapping[str, Definition] = None) -> Formula:
    """Replace every defined-predicate node by its primitive template.

    Template binders are renamed to names unused anywhere in ``f`` (and in
    the expansion so far), so no capture occurs.
    """
    if defs is None:
        defs = DEFAULT_DEFINITIONS
    fresh = _Fresh(all_vars(f))

    def go(g: Formula) -> Formula:
        if isinstance(g, Pred):
            d = defs.get(g.name)
            if d is None:
                raise FormulaError(f"no definition for predicate {g.name!r}")
            if len(g.args) != d.arity:
                raise FormulaError(f"{g.name} expects {d.arity} argument(s)")
            body = _freshen_binders(d.template, fresh)
            return go(_substitute(body, dict(zip(d.params, g.args))))
        if isinstance(g, Atom):
            return g
        return _rebuild(g, tuple(go(c) for c in children(g)))

    return go(f)


def _freshen_binders(f: Formula, fresh: _Fresh) -> Formula:
    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, (Atom, Pred)):
            return _substitute(g, {k: Var(v) for k, v in env.items()})
        if isinstance(g, Quantifier):
            new = fresh(g.var)
            return type(g)(new, go(g.body, {**env, g.var: new}))
        return _rebuild(g, tuple(go(c, env) for c in children(g)))

    return go(f, {})


def flatten_terms(f: Formula) -> Formula:
    """Reduce every atom to terms of label depth at most one.

    ``L L t`` becomes a fresh ``v`` under ``ex v.`` with the conjunct
    ``L t = v``; the defining conjuncts precede the reduced atom.
    """
    fresh = _Fresh(all_vars(f))

    def reduce(t: Term, defs_out: list, bound: list) -> Term:
        depth = label_depth(t)
        if depth <= 1:
            return t
        cur: Term = Var(term_var(t))
        for _ in range(depth - 1):
            v = fresh("v")
            bound.append(v)
            defs_out.append(Atom("eq", Label(cur), Var(v)))
            cur = Var(v)
        return Label(cur)

    def go(g: Formula) -> Formula:
        if isinstance(g, Pred):
            raise FormulaError("flatten_terms needs a formula without defined predicates")
        if isinstance(g, Atom):
            defs_out, bound = [], []
            left = reduce(g.left, defs_out, bound)
            right = reduce(g.right, defs_out, bound)
            if not bound:
                return g
            out = conj(defs_out + [Atom(g.kind, left, right)])
            for v in reversed(bound):
                out = Ex(v, out)
            return out
        return _rebuild(g, tuple(go(c) for c in children(g)))

    return go(f)


def normalize(f: Formula, defs: Mapping[str, Definition] = None) -> Formula:
    """Expand definitions, flatten label terms and rename binders apart."""
    return rename_apart(flatten_terms(expand_definitions(f, defs)))


# --- JSON ------------------------------------------------------------------

_JSON_BINARY = {And: "and", Or: "or", Implies: "imp", Iff: "iff"}
_FROM_JSON_BINARY = {v: k for k, v in _JSON_BINARY.items()}


def _term_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"op": "var", "name": t.name}
    return {"op": "label", "arg": _term_json(t.arg)}


def to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"op": f.kind, "left": _term_json(f.left), "right": _term_json(f.right)}
    if isinstance(f, Pred):
        return {"op": "pred", "name": f.name, "args": [_term_json(a) for a in f.args]}
    if isinstance(f, Not):
        return {"op": "not", "arg": to_json(f.body)}
    if isinstance(f, Quantifier):
        return {"op": "all" if isinstance(f, All) else "ex", "var": f.var,
                "body": to_json(f.body)}
    return {"op": _JSON_BINARY[type(f)], "left": to_json(f.left), "right": to_json(f.right)}


def _term_from_json(d: dict) -> Term:
    if d["op"] == "var":
        return Var(d["name"])
    if d["op"] == "label":
        return Label(_term_from_json(d["arg"]))
    raise FormulaError(f"not a term node: {d['op']!r}")


def from_json(d: dict) -> Formula:
    op = d["op"]
    if op in ("eq", "in"):
        return Atom(op, _term_from_json(d["left"]), _term_from_json(d["right"]))
    if op == "pred":
        return Pred(d["name"], tuple(_term_from_json(a) for a in d["args"]))
    if op == "not":
        return Not(from_json(d["arg"]))
    if op in ("all", "ex"):
        return (All if op == "all" else Ex)(d["var"], from_json(d["body"]))
    if op in _FROM_JSON_BINARY:
        return _FROM_JSON_BINARY[op](from_json(d["left"]), from_json(d["right"]))
    raise FormulaError(f"unknown node op {op!r}")


DEFAULT_DEFINITIONS = {
    "sub": make_definition("sub", ("a", "b"), "all w. (w in a -> w in b)", infix=True),
    "psub": make_definition(
        "psub", ("a", "b"), "(all w. (w in a -> w in b)) & ~(a = b)", infix=True
    ),
    # exactly one member
    "single": make_definition(
        "single", ("a",), "ex u. (u in a & all w. (w in a -> w = u))"
    ),
}
