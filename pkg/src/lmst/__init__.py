"""Formula analysis and finite models for labeled mereological set theory."""

from .cyclicity import (
    Classification, OccurrenceSpan, VarGraph, build_graph, classification_report,
    classify, enumerate_cyclic_occurrences, export_dot, is_cyclic, is_multi_cyclic,
    relaxed_admissible,
)
from .formula import (
    DEFAULT_DEFINITIONS, FormulaError, ParseError, UnknownPredicateError, alpha_eq,
    expand_definitions, flatten_terms, free_vars, normalize, parse, rename_apart,
    render,
)
from .model import (
    AxiomReport, Model, canonical_model, check_axioms, check_scheme7, confusion_demo,
    evaluate, ext, model_from_json, russell_analysis, search_labels,
)
from .stratification import (
    StratConfig, TypeAssignment, Unstratifiable, acyclic_implies_stratified_check,
    stratify,
)

__version__ = "0.1.0"
