import random

import pytest

from lmst.corpus import BUNDLED, CorpusError, bundled_corpus, load_corpus, parse_corpus
from lmst.formula import atoms, free_vars, label_depth, parse, render
from lmst.generate import random_corpus, random_formula


def test_comments_and_blank_lines():
    rows = parse_corpus("# header\n\nx in y  # trailing\n  z = z\n")
    assert [(n, t) for n, t, _ in rows] == [(3, "x in y"), (4, "z = z")]


def test_malformed_line_number():
    with pytest.raises(CorpusError, match="line 3") as info:
        parse_corpus("x in y\nz = z\nx in\n")
    assert info.value.line == 3


def test_load_from_file(tmp_path):
    p = tmp_path / "c.lmst"
    p.write_text("ex z. ~(L z sub z)\n", encoding="utf-8")
    assert load_corpus(p)[0][2] == parse("ex z. ~(L z sub z)")


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_round_trip(name):
    for _, text, f in bundled_corpus(name):
        assert parse(render(f)) == f, text


def test_bundled_sizes():
    assert len(bundled_corpus("scheme5")) == 20
    assert len(bundled_corpus("scheme7")) == 10


def test_bundled_scheme_corpora_have_one_variable():
    for name in ("scheme5", "scheme7"):
        for _, text, f in bundled_corpus(name):
            assert free_vars(f) <= {"z"}, text


def test_unknown_bundle():
    with pytest.raises(KeyError):
        bundled_corpus("nope")


def test_generator_is_deterministic():
    assert random_corpus(50, seed=9) == random_corpus(50, seed=9)
    assert random_corpus(50, seed=9) != random_corpus(50, seed=10)


def test_generator_bounds():
    rng = random.Random(4)
    for _ in range(500):
        f = random_formula(rng, max_atoms=6, max_vars=4)
        occ = list(atoms(f))
        assert 1 <= len(occ) <= 6
        for _, a in occ:
            assert label_depth(a.left) <= 1 and label_depth(a.right) <= 1
        assert free_vars(f) <= {"x", "y", "z", "w"}


def test_generated_formulas_round_trip():
    for f in random_corpus(300, seed=1):
        assert parse(render(f)) == f
