import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelaw.graph_core import (
    Graph,
    GraphError,
    ResourceCapError,
    complete_graph,
    cycle_graph,
    path_tree,
    square_with_diagonal,
    star_tree,
)
from treelaw.mst_exact import (
    brute_force_mst_distribution,
    forest_class_probs_kn,
    kruskal_forest_prob,
    mst_distribution,
    mst_prob,
    star_prob_closed_form,
    uniform_distribution,
)

F = Fraction


@st.composite
def connected_graphs(draw, max_n=5, max_m=7):
    n = draw(st.integers(2, max_n))
    perm = draw(st.permutations(range(n)))
    edges = set()
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges.add(tuple(sorted((perm[i], perm[j]))))
    others = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    room = max(0, min(max_m - len(edges), len(others)))
    extra = draw(st.lists(st.sampled_from(others), unique=True, max_size=room)) if others else []
    return Graph(n, sorted(edges | set(extra)))


def test_square_with_diagonal_values():
    g = square_with_diagonal()
    d = mst_distribution(g)
    assert sum(d.values()) == 1
    assert sorted(set(d.values())) == [F(7, 60), F(2, 15)]


def test_cycle_is_uniform():
    d = mst_distribution(cycle_graph(6))
    assert set(d.values()) == {F(1, 6)}


def test_uniform_distribution():
    d = uniform_distribution(complete_graph(4))
    assert len(d) == 16 and set(d.values()) == {F(1, 16)}


@settings(max_examples=40, deadline=None)
@given(connected_graphs())
def test_methods_agree_and_normalize(g):
    d = mst_distribution(g)
    assert sum(d.values()) == 1
    brute = brute_force_mst_distribution(g)
    for t, p in d.items():
        assert brute.get(t, 0) == p
        assert mst_prob(g, t, "external") == p
        assert mst_prob(g, t, "rd") == p
        assert mst_prob(g, t, "kruskal") == p


def test_star_closed_form():
    for n in range(3, 8):
        k = complete_graph(n)
        assert mst_prob(k, star_tree(k)) == star_prob_closed_form(n)
        assert star_prob_closed_form(n) == F(1, math.prod(range(1, 2 * n - 2, 2)))


def test_kruskal_forest_prob_single_edge():
    k = complete_graph(5)
    assert kruskal_forest_prob(k, [0]) == F(1, 10)


def test_forest_classes_match_labeled_trees():
    table = forest_class_probs_kn(5)
    k5 = complete_graph(5)
    path = mst_prob(k5, path_tree(k5, range(5)))
    assert path in {p for p, _, _ in table.values()}
    # labeled trees of every shape add up to 1
    assert sum(p * c for key, (p, _, c) in table.items() if len(key) == 1) == 1


def test_errors():
    g = square_with_diagonal()
    with pytest.raises(GraphError):
        mst_prob(g, (0, 1))
    with pytest.raises(ValueError):
        mst_prob(g, (0, 1, 2), "nope")
    with pytest.raises(ResourceCapError):
        mst_distribution(complete_graph(5), tree_cap=10)
    with pytest.raises(ResourceCapError):
        brute_force_mst_distribution(complete_graph(6))
