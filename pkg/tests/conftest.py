import pytest
from hypothesis import settings, strategies as st

from lmst.formula import All, And, Atom, Ex, Iff, Implies, Label, Not, Or, Pred, Var

_ACCEPTANCE = pytest.StashKey[list]()

# first examples pay for cache warm-up; wall-clock deadlines only add flakiness
settings.register_profile("lmst", deadline=None)
settings.load_profile("lmst")

NAMES = ("x", "y", "z", "w")


def terms(max_depth=2):
    return st.builds(
        lambda name, depth: _wrap(Var(name), depth),
        st.sampled_from(NAMES), st.integers(0, max_depth),
    )


def _wrap(t, depth):
    for _ in range(depth):
        t = Label(t)
    return t


def atoms_st(max_depth=2, defined=True):
    prim = st.builds(Atom, st.sampled_from(["eq", "in"]), terms(max_depth), terms(max_depth))
    if not defined:
        return prim
    preds = st.one_of(
        st.builds(lambda a, b: Pred("sub", (a, b)), terms(max_depth), terms(max_depth)),
        st.builds(lambda a, b: Pred("psub", (a, b)), terms(max_depth), terms(max_depth)),
        st.builds(lambda a: Pred("single", (a,)), terms(max_depth)),
    )
    return st.one_of(prim, preds)


def formulas(max_depth=2, defined=True, max_leaves=6):
    def extend(inner):
        return st.one_of(
            st.builds(Not, inner),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Iff, inner, inner),
            st.builds(All, st.sampled_from(NAMES), inner),
            st.builds(Ex, st.sampled_from(NAMES), inner),
        )

    return st.recursive(atoms_st(max_depth, defined), extend, max_leaves=max_leaves)


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call before asserting so failures are listed too."""

    def record(number, text, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}"
        if detail:
            line += f" ({detail})"
        request.config.stash[_ACCEPTANCE].append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
