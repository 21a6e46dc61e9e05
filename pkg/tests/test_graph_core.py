from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelaw.graph_core import (
    Graph,
    GraphError,
    UnionFind,
    bareiss_det,
    broken_cycle,
    canonical,
    complete_graph,
    cycle_graph,
    cycle_relation,
    enumerate_spanning_trees,
    format_rational,
    is_spanning_tree,
    kruskal_select,
    parse_rational,
    satisfies_cycle_order,
    spanning_tree_count,
    square_with_diagonal,
    theta_graph,
)


@st.composite
def small_graphs(draw, max_n=6, max_m=9):
    n = draw(st.integers(2, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(max_m, len(pairs))))
    return Graph(n, chosen)


def test_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])


def test_json_roundtrip():
    g = square_with_diagonal()
    assert Graph.from_json(g.to_json()) == g
    assert Graph.from_json('{"n": 2, "edges": [[0, 1]]}').m == 1


def test_cayley_counts():
    for n in range(2, 7):
        g = complete_graph(n)
        assert spanning_tree_count(g) == n ** (n - 2)
        assert len(enumerate_spanning_trees(g)) == n ** (n - 2)


def test_theta_tree_count():
    for r, s, t in [(2, 1, 2), (2, 2, 2), (3, 1, 3), (1, 2, 4)]:
        g = theta_graph(r, s, t)
        assert g.m == r + s + t
        assert spanning_tree_count(g) == r * s + r * t + s * t


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_tree_count_matches_networkx(g):
    if not g.is_connected():
        assert spanning_tree_count(g) == 0
        with pytest.raises(GraphError):
            enumerate_spanning_trees(g)
        return
    trees = enumerate_spanning_trees(g)
    assert len(trees) == spanning_tree_count(g)
    assert len(set(trees)) == len(trees)
    assert all(is_spanning_tree(g, t) for t in trees)
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    expected = round(nx.number_of_spanning_trees(h)) if nx.is_connected(h) else 0
    assert spanning_tree_count(g) == expected


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.randoms(use_true_random=False))
def test_kruskal_output_respects_cycle_order(g, rnd):
    if not g.is_connected():
        return
    order = list(range(g.m))
    rnd.shuffle(order)
    t = kruskal_select(g, order)
    assert is_spanning_tree(g, t)
    assert satisfies_cycle_order(g, t, order)


def test_broken_cycle_and_relation():
    g = square_with_diagonal()  # edges 01 12 23 30 02
    t = canonical([0, 1, 2])   # path 0-1-2-3
    assert set(broken_cycle(g, t, 3)) == {0, 1, 2}
    assert set(broken_cycle(g, t, 4)) == {0, 1}
    rel = cycle_relation(g, t)
    assert (0, 4) in rel and (2, 4) not in rel


def test_union_find():
    uf = UnionFind(4)
    assert uf.union(0, 1) and uf.union(2, 3)
    assert not uf.union(1, 0)
    assert uf.union(1, 3)
    assert uf.find(0) == uf.find(2)


def test_bareiss_det():
    assert bareiss_det([[2, 1], [1, 2]]) == 3
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[1, 2], [2, 4]]) == 0


@given(st.fractions())
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_cycle_graph_trees():
    assert spanning_tree_count(cycle_graph(7)) == 7
    assert parse_rational("3/6") == Fraction(1, 2)
