import hypothesis.strategies as st
import pytest
from hypothesis import settings

from selfnest.reduction import random_linear_dag
from selfnest.trees import Tree, random_tree

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def trees(max_leaves=12):
    """Hypothesis strategy for small unordered trees."""
    return st.recursive(
        st.just(Tree()),
        lambda kids: st.lists(kids, min_size=1, max_size=4).map(Tree),
        max_leaves=max_leaves,
    )


@st.composite
def random_trees(draw, lo=1, hi=40):
    return random_tree(draw(st.integers(lo, hi)), draw(st.integers(0, 2**32)))


@st.composite
def linear_dags(draw, max_h=4, max_d=3):
    H = draw(st.integers(0, max_h))
    return random_linear_dag(H, draw(st.integers(1, max_d)), draw(st.integers(0, 2**32)))


@pytest.fixture
def examples():
    return {
        "leaf": "()",
        "cherry": "(()())",
        "path2": "(())",
        "mixed": "((())())",
    }


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line per acceptance check."""

    def record(label: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
