"""Command-line front end.

Exit codes: 0 success, 1 a violation or failed check was found, 2 bad input,
3 a semantic error (a required set does not exist, an infeasible search).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import model as ml
from .corpus import BUNDLED, CorpusError, bundled_corpus, load_corpus
from .cyclicity import build_graph, classification_report, export_dot, graph_to_json
from .formula import FormulaError, normalize, parse, render
from .generate import random_corpus
from .stratification import StratConfig, acyclic_implies_stratified_check, stratify

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(report, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2) + "\n")
        return
    for line in _text_lines(report):
        out.write(line + "\n")


def _text_lines(value, prefix: str = ""):
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                yield f"{prefix}{key}:"
                yield from _text_lines(item, prefix + "  ")
            else:
                yield f"{prefix}{key}: {_scalar(item)}"
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                yield f"{prefix}-"
                yield from _text_lines(item, prefix + "  ")
            else:
                yield f"{prefix}- {_scalar(item)}"
    else:
        yield f"{prefix}{_scalar(value)}"


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def _parse_formula(text: str):
    try:
        return parse(text)
    except FormulaError as exc:
        raise InputError(f"parse error: {exc}") from None


def _load_model(path: str) -> ml.Model:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return ml.model_from_json(data)
    except OSError as exc:
        raise InputError(f"cannot read model file: {exc}") from None
    except (json.JSONDecodeError, ml.ModelError, ValueError) as exc:
        raise InputError(f"invalid model file {path}: {exc}") from None


def _load_corpus_arg(arg):
    if arg is None:
        return []
    if arg.startswith("bundled:"):
        try:
            return bundled_corpus(arg[len("bundled:"):])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    try:
        return load_corpus(arg)
    except OSError as exc:
        raise InputError(f"cannot read corpus: {exc}") from None
    except CorpusError as exc:
        raise InputError(str(exc)) from None


def _seed(default: int) -> int:
    env = os.environ.get("LMST_SEED")
    if env is None:
        return default
    try:
        return int(env)
    except ValueError:
        raise InputError(f"LMST_SEED must be an integer, got {env!r}") from None


# --- subcommands -----------------------------------------------------------

def cmd_classify(args, out) -> int:
    f = _parse_formula(args.formula)
    report = classification_report(f)
    report["formula"] = args.formula
    report["mode"] = args.mode
    report["multi_cyclic_verdict"] = report["multi_cyclic"][args.mode]
    _emit(report, args.format, out)
    return EXIT_OK


def cmd_graph(args, out) -> int:
    g = build_graph(normalize(_parse_formula(args.formula)))
    if args.format == "dot":
        out.write(export_dot(g))
    else:
        _emit(graph_to_json(g), "json", out)
    return EXIT_OK


def cmd_stratify(args, out) -> int:
    f = _parse_formula(args.formula)
    result = stratify(f, StratConfig(args.delta_L))
    report = {"formula": args.formula, "normalized": render(normalize(f)),
              "delta_label": args.delta_L, **result.to_json()}
    _emit(report, args.format, out)
    return EXIT_OK


def _model_build(args, out) -> int:
    try:
        m = ml.canonical_model(args.atoms, args.variant, args.label)
    except ml.ModelError as exc:
        raise InputError(str(exc)) from None
    text = json.dumps(m.to_json(), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _model_check(args, out) -> int:
    m = _load_model(args.model)
    corpus = [text for _, text, _ in _load_corpus_arg(args.corpus)]
    report = ml.check_axioms(m, corpus)
    _emit({"model": m.to_json(), **report.to_json()}, args.format, out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _model_ext(args, out) -> int:
    m = _load_model(args.model)
    f = _parse_formula(args.formula)
    try:
        value = ml.ext(m, f, args.var)
    except ml.UnboundVariableError as exc:
        raise InputError(str(exc)) from None
    report = {"formula": args.formula, "variable": args.var, "extension": value,
              "exists": value is not None, "shown": ml.mask_str(value, m.k)}
    _emit(report, args.format, out)
    return EXIT_OK


def _model_demo(args, out) -> int:
    m = _load_model(args.model)
    if args.demo == "confusion":
        report = ml.confusion_demo(m, strict=args.strict)
        code = EXIT_OK if report["confirmed"] else EXIT_VIOLATION
    else:
        report = ml.russell_analysis(m, relation=args.relation, strict=args.strict)
        code = EXIT_OK if report["resolution_holds"] else EXIT_VIOLATION
    _emit({"demo": args.demo, **report}, args.format, out)
    return code


def _model_search(args, out) -> int:
    corpus = [text for _, text, _ in _load_corpus_arg(args.corpus)]
    seed = _seed(args.seed)
    try:
        found = ml.search_labels(args.atoms, args.variant, args.goal, args.limit,
                                 corpus=corpus, formula=args.formula,
                                 sample=args.sample, seed=seed)
    except FormulaError as exc:
        raise InputError(f"parse error: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {"atoms": args.atoms, "variant": args.variant, "goal": args.goal,
              "limit": args.limit, "sample": args.sample,
              "found": len(found), "models": [m.to_json() for m in found]}
    _emit(report, args.format, out)
    return EXIT_OK


def cmd_model(args, out) -> int:
    action = {"build": _model_build, "check": _model_check, "ext": _model_ext,
              "demo": _model_demo, "search": _model_search}[args.action]
    return action(args, out)


def cmd_corpus(args, out) -> int:
    entries = []
    sources = []
    for path in args.paths:
        entries.extend(text for _, text, _ in _load_corpus_arg(path))
        sources.append(path)
    if args.generate:
        seed = _seed(args.seed)
        entries.extend(render(f) for f in random_corpus(args.generate, seed=seed))
        sources.append(f"generated:{args.generate}:seed={seed}")
    if not sources:
        entries.extend(text for _, text, _ in bundled_corpus("sample"))
        sources.append("bundled:sample")

    strat = acyclic_implies_stratified_check(entries, StratConfig(args.delta_L))
    report = {"sources": sources, "stratification": strat}
    failed = bool(strat["violations"])
    if args.scheme7:
        sweep = []
        for m in ml.label_injections(args.atoms, args.variant):
            r = ml.check_scheme7(m, entries)
            sweep.append({"label": m.to_json()["label"], **r.to_json()})
            failed = failed or not r.ok
        report["scheme7"] = {
            "atoms": args.atoms,
            "variant": args.variant,
            "models": len(sweep),
            "violations": sum(len(s["violations"]) for s in sweep),
            "per_model": sweep,
        }
    _emit(report, args.format, out)
    return EXIT_VIOLATION if failed else EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmst", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(q, choices=("json", "text"), default="json"):
        q.add_argument("--format", choices=choices, default=default)

    q = sub.add_parser("classify", help="cyclicity verdicts for a formula")
    q.add_argument("formula")
    q.add_argument("--mode", choices=("separate", "literal"), default="separate")
    fmt(q)
    q.set_defaults(func=cmd_classify)

    q = sub.add_parser("graph", help="variable multigraph of a formula")
    q.add_argument("formula")
    fmt(q, ("dot", "json"), "dot")
    q.set_defaults(func=cmd_graph)

    q = sub.add_parser("stratify", help="stratification levels or a witness cycle")
    q.add_argument("formula")
    q.add_argument("--delta-L", dest="delta_L", type=int, default=0)
    fmt(q)
    q.set_defaults(func=cmd_stratify)

    q = sub.add_parser("model", help="canonical models")
    msub = q.add_subparsers(dest="action", required=True)
    b = msub.add_parser("build")
    b.add_argument("--atoms", type=int, required=True)
    b.add_argument("--variant", choices=ml.VARIANTS, default="no-empty")
    b.add_argument("--label", default="identity",
                   help="identity, swap or atoms:p0,p1,...")
    b.add_argument("--output")
    c = msub.add_parser("check")
    c.add_argument("model")
    c.add_argument("--corpus", help="corpus file or bundled:NAME")
    fmt(c)
    e = msub.add_parser("ext")
    e.add_argument("model")
    e.add_argument("formula")
    e.add_argument("--var", default="z")
    fmt(e)
    d = msub.add_parser("demo")
    d.add_argument("demo", choices=("confusion", "russell"))
    d.add_argument("model")
    d.add_argument("--strict", action="store_true", help="read the subset relation as strict")
    d.add_argument("--relation", choices=("subset", "membership"), default="subset")
    fmt(d)
    s = msub.add_parser("search")
    s.add_argument("--atoms", type=int, required=True)
    s.add_argument("--variant", choices=ml.VARIANTS, default="no-empty")
    s.add_argument("--goal", choices=ml.GOALS, required=True)
    s.add_argument("--corpus", help="corpus file or bundled:NAME")
    s.add_argument("--formula", help="closed formula for --goal formula")
    s.add_argument("--limit", type=int, default=1)
    s.add_argument("--sample", type=int, help="draw this many random labelings instead")
    s.add_argument("--seed", type=int, default=0)
    fmt(s)
    q.set_defaults(func=cmd_model)

    q = sub.add_parser("corpus", help="corpus sweeps")
    csub = q.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run")
    r.add_argument("paths", nargs="*", help=f"corpus files or bundled:NAME ({', '.join(BUNDLED)})")
    r.add_argument("--generate", type=int, default=0, help="add N random formulas")
    r.add_argument("--seed", type=int, default=1)
    r.add_argument("--delta-L", dest="delta_L", type=int, default=0)
    r.add_argument("--scheme7", action="store_true",
                   help="also sweep every labeling for extension collisions")
    r.add_argument("--atoms", type=int, default=2)
    r.add_argument("--variant", choices=ml.VARIANTS, default="no-empty")
    fmt(r)
    q.set_defaults(func=cmd_corpus)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"lmst: {exc}\n")
        return EXIT_INPUT
    except ml.SemanticError as exc:
        err.write(f"lmst: {exc}\n")
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
