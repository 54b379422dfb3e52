import random

import pytest
from hypothesis import given

from conftest import formulas
from oracles import atom_edges, brute_cyclic_paths, dfs_has_cycle
from lmst.cyclicity import (
    MODES, Classification, VarGraph, build_graph, classification_report, classify,
    enumerate_cyclic_occurrences, export_dot, is_cyclic, is_multi_cyclic,
    relaxed_admissible,
)
from lmst.formula import And, FormulaError, normalize, parse, rename_apart
from lmst.generate import random_formula

SUBSET_EXAMPLE = "~(L z sub z)"


def norm(text):
    return normalize(parse(text))


class TestBuildGraph:
    def test_single_edge(self):
        g = build_graph(norm("x in y"))
        assert set(g.nodes) == {"x", "y"}
        assert [(e.a, e.b) for e in g.edges] == [("x", "y")]

    def test_subset_example_has_parallel_edges(self):
        g = build_graph(norm(SUBSET_EXAMPLE))
        assert set(g.nodes) == {"w", "z"}
        assert [(e.a, e.b) for e in g.edges] == [("w", "z"), ("w", "z")]
        assert [e.text for e in g.edges] == ["w in L z", "w in z"]

    def test_self_loop(self):
        g = build_graph(norm("x in x"))
        assert g.nodes == ("x",)
        assert len(g.edges) == 1 and g.edges[0].is_loop

    def test_identity_atoms_are_edges(self):
        g = build_graph(norm("L x = y"))
        assert [(e.a, e.b) for e in g.edges] == [("x", "y")]

    def test_rejects_nested_labels(self):
        with pytest.raises(FormulaError):
            build_graph(parse("L L x = y"))

    def test_rejects_unexpanded_predicates(self):
        with pytest.raises(FormulaError):
            build_graph(parse("x sub y"))

    def test_occurrence_ids_are_unique(self):
        g = build_graph(norm("x in y & (y in x | x in y)"))
        assert [e.occurrence for e in g.edges] == [0, 1, 2]


class TestIsCyclic:
    def test_tree(self):
        assert not is_cyclic(build_graph(norm("x in y")))

    def test_subset_example(self):
        assert is_cyclic(build_graph(norm(SUBSET_EXAMPLE)))

    def test_triangle(self):
        f = norm("x in y & y in z & z in x")
        assert dfs_has_cycle(atom_edges(f))
        assert is_cyclic(build_graph(f))

    def test_forest_with_two_components(self):
        assert not is_cyclic(build_graph(norm("x in y & z = w")))

    def test_bound_variables_with_one_name_are_distinct_nodes(self):
        # after renaming, the two x's are different vertices
        f = norm("(ex x. x in y) & (ex x. y in x)")
        assert not is_cyclic(build_graph(f))

    def test_forest_criterion_against_dfs(self):
        rng = random.Random(7)
        for _ in range(300):
            f = normalize(random_formula(rng))
            assert is_cyclic(build_graph(f)) == dfs_has_cycle(atom_edges(f))


class TestOccurrences:
    def test_two_self_loops(self):
        f = norm("(x in x) & (y in y)")
        spans = enumerate_cyclic_occurrences(f)
        assert [s.path for s in spans] == [(), (0,), (1,)]
        assert [s.path for s in spans] == brute_cyclic_paths(f)

    def test_subset_example_nested(self):
        f = norm(SUBSET_EXAMPLE)
        spans = enumerate_cyclic_occurrences(f)
        assert [s.path for s in spans] == [(), (0,), (0, 0)]
        assert [s.path for s in spans] == brute_cyclic_paths(f)
        assert all(a.nested_with(b) for a in spans for b in spans)

    def test_acyclic(self):
        assert enumerate_cyclic_occurrences(norm("x in y")) == []

    @given(formulas())
    def test_matches_brute_force(self, f):
        g = normalize(f)
        assert [s.path for s in enumerate_cyclic_occurrences(g)] == brute_cyclic_paths(g)

    @given(formulas())
    def test_monotone(self, f):
        g = normalize(f)
        paths = {s.path for s in enumerate_cyclic_occurrences(g)}
        for p in paths:
            for i in range(len(p)):
                assert p[:i] in paths


class TestMultiCyclic:
    def test_subset_example_separate(self):
        assert not is_multi_cyclic(norm(SUBSET_EXAMPLE), "separate")

    def test_subset_example_literal(self):
        assert is_multi_cyclic(norm(SUBSET_EXAMPLE), "literal")

    def test_two_disjoint_loops(self):
        assert is_multi_cyclic(norm("(x in x) & (y in y)"), "separate")

    def test_proper_subset_reading_is_multi_cyclic(self):
        # the ~(a = b) conjunct adds a second, separate self-loop
        assert is_multi_cyclic(norm("L z psub z"), "separate")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            is_multi_cyclic(norm("x in x"), "sideways")

    @given(formulas())
    def test_separate_implies_literal(self, f):
        g = normalize(f)
        if is_multi_cyclic(g, "separate"):
            assert is_multi_cyclic(g, "literal")


class TestRelaxed:
    def test_equivalent_loops(self):
        assert not relaxed_admissible(norm("(x in x) & (y in y)"))

    def test_distinct_cyclic_parts(self):
        assert relaxed_admissible(norm("(x in x) & (ex u. ex v. (u in v & v in u))"))

    def test_no_cycles(self):
        assert relaxed_admissible(norm("x in y"))

    def test_closed_formula_with_equivalent_parts(self):
        assert not relaxed_admissible(norm("ex x. ex y. (x in x & y in y)"))

    def test_shared_structure_but_different_shape(self):
        assert relaxed_admissible(norm("ex x. ex y. (x in x & L y = y)"))


class TestClassify:
    def test_open_atom(self):
        assert classify("x in y") == Classification(
            acyclic=True, cyclic=False, multi_cyclic=False, multi_cyclic_mode="separate",
            relaxed_admissible=True, parameter_free=False,
        )

    def test_admitted_cyclic_example(self):
        c = classify("ex z. ~(L z sub z)")
        assert (c.cyclic, c.multi_cyclic, c.parameter_free) == (True, False, True)
        assert c.relaxed_admissible

    def test_disjoint_spans(self):
        c = classify("ex x. ex y. ((x in x) & (y in y))")
        assert (c.cyclic, c.multi_cyclic) == (True, True)
        assert not c.relaxed_admissible

    def test_literal_mode(self):
        assert classify("ex z. ~(L z sub z)", mode="literal").multi_cyclic

    def test_report_schema(self):
        r = classification_report("ex z. ~(L z sub z)")
        assert list(r) == ["formula", "normalized", "acyclic", "cyclic", "multi_cyclic",
                           "relaxed_admissible", "parameter_free", "cyclic_occurrences"]
        assert r["multi_cyclic"] == {"separate": False, "literal": True}
        assert r["cyclic_occurrences"] == [[], [0], [0, 0], [0, 0, 0]]

    @given(formulas())
    def test_invariants(self, f):
        for mode in MODES:
            c = classify(f, mode=mode)
            assert c.cyclic == (not c.acyclic)
            if c.multi_cyclic:
                assert c.cyclic
            if not c.multi_cyclic:
                assert c.relaxed_admissible
            if c.acyclic:
                assert c.relaxed_admissible and not c.multi_cyclic

    @given(formulas())
    def test_stable_under_renaming(self, f):
        assert classify(f) == classify(rename_apart(f))

    @given(formulas(), formulas())
    def test_stable_under_conjunct_swap(self, f, g):
        a, b = classify(And(f, g)), classify(And(g, f))
        assert a == b


class TestDot:
    def test_single_edge(self):
        text = export_dot(build_graph(norm("x in y")))
        assert text.count(" -- ") == 1
        assert text.startswith("graph ") and text.rstrip().endswith("}")

    def test_parallel_edges(self):
        text = export_dot(build_graph(norm(SUBSET_EXAMPLE)))
        lines = [ln for ln in text.splitlines() if " -- " in ln]
        assert len(lines) == 2
        assert all(ln.strip().startswith('"w" -- "z"') for ln in lines)
        assert 'label="w in L z"' in lines[0] and 'label="w in z"' in lines[1]

    def test_self_loop(self):
        text = export_dot(build_graph(norm("x in x")))
        assert '"x" -- "x"' in text

    def test_nodes_only(self):
        text = export_dot(VarGraph(("x", "y"), ()))
        assert " -- " not in text
        assert '"x";' in text and '"y";' in text

    def test_quotes_are_escaped(self):
        text = export_dot(VarGraph(('a"b',), ()))
        assert '"a\\"b";' in text
