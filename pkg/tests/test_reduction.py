from collections import Counter

import pytest
from hypothesis import given

from selfnest.errors import GenerationError, ParseError
from selfnest.reduction import (
    DagReduction,
    LinearDag,
    expand,
    expand_linear,
    from_linear,
    height_profile,
    is_linear,
    is_self_nested_naive,
    is_self_nested_profile,
    linear_size,
    multiplicities,
    random_linear_dag,
    reduce,
    to_linear,
)
from selfnest.trees import Tree, is_isomorphic, parse, size, subtrees

from conftest import linear_dags, random_trees, trees


def test_reduce_leaf():
    d = reduce(Tree())
    assert list(d.vertices()) == [(0, 1)] and d.n_edges == 0


def test_reduce_cherry():
    d = reduce(parse("(()())"))
    assert list(d.vertices()) == [(0, 1), (1, 1)]
    assert d.edges == {((1, 1), (0, 1)): 2}


def test_expand_examples():
    assert expand(reduce(Tree())).key == "()"
    assert is_isomorphic(expand(reduce(parse("(()())"))), parse("(()())"))


def test_linear_examples():
    assert is_linear(reduce(Tree()))
    assert is_linear(reduce(parse("(()())")))
    assert not is_linear(reduce(parse("((())(()()))")))
    assert to_linear(reduce(parse("(()())"))) == LinearDag(((2,),))
    with pytest.raises(ValueError):
        to_linear(reduce(parse("((())(()()))")))


def test_linear_size_example():
    l = LinearDag(((2,), (1, 2)))
    assert linear_size(l) == 8 == size(expand_linear(l))
    assert linear_size(LinearDag(())) == 1


def test_random_linear_dag_edges():
    assert random_linear_dag(0, 3, 1) == LinearDag(())
    for seed in range(10):
        assert random_linear_dag(1, 1, seed) == LinearDag(((1,),))
    with pytest.raises(ValueError):
        random_linear_dag(-1, 2, 0)


def test_random_linear_dag_rejection_cap():
    # rows of height 8 with total <= 1 force N(8,7)=1 and zeros elsewhere; rare under d=1 draws
    with pytest.raises(GenerationError):
        random_linear_dag(40, 1, 0)


def test_invalid_dags_rejected():
    with pytest.raises(ValueError):
        DagReduction((1, 1), {((1, 1), (0, 1)): 0})
    with pytest.raises(ValueError):
        DagReduction((1, 1), {((0, 1), (1, 1)): 1})
    with pytest.raises(ValueError):
        LinearDag(((0,),))


def test_dag_text_roundtrip_and_errors():
    d = reduce(parse("((())(()())())"))
    assert DagReduction.from_text(d.to_text()) == d
    with pytest.raises(ParseError):
        DagReduction.from_text("dag H=1\nm 0 1\nbogus\n")


@given(random_trees(hi=80))
def test_roundtrip(t):
    assert is_isomorphic(expand(reduce(t)), t)


@given(random_trees(hi=80))
def test_multiplicities_count_occurrences(t):
    d = reduce(t)
    keys = {v: expand(d, v).key for v in d.vertices()}
    occ = Counter(s.key for s in subtrees(t))
    assert {keys[v]: m for v, m in multiplicities(d).items()} == dict(occ)


@given(random_trees(hi=60))
def test_self_nested_characterisations_agree(t):
    d = reduce(t)
    assert is_linear(d) == is_self_nested_profile(d) == is_self_nested_naive(t)


@given(linear_dags())
def test_linear_roundtrip(l):
    t = expand_linear(l)
    assert is_self_nested_naive(t)
    assert to_linear(reduce(t)) == l
    assert reduce(t) == from_linear(l)
    assert linear_size(l) == size(t)


@given(trees())
def test_profile_sums_match_edges(t):
    d = reduce(t)
    prof = height_profile(d)
    for u in d.vertices():
        assert sum(prof[u].values()) == sum(n for _, n in d.children(u))
