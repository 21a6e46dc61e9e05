import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures_lib import k4_intro_measures
from treelaw.graph_core import (
    ResourceCapError,
    complete_graph,
    cycle_graph,
    square_with_diagonal,
    theta_graph,
)
from treelaw.mst_exact import mst_distribution
from treelaw.shift_exact import (
    CollisionError,
    EdgeMeasure,
    closing_gaps,
    find_snowman,
    iid_uniform,
    is_snowman_free,
    perm_distribution_exact,
    perm_prob_exact,
    quintic,
    shift_measures,
    shiftahedron_contains,
    theta_report,
    theta_type_probs_shifted,
    total_variation,
    tree_distribution_exact,
)

F = Fraction
E = EdgeMeasure

quarters = st.integers(0, 8).map(lambda k: F(k, 4))


@st.composite
def interval_measures(draw, m):
    out = []
    for _ in range(m):
        a = draw(quarters)
        b = a + draw(st.integers(1, 4).map(lambda k: F(k, 4)))
        out.append(E.uniform(a, b))
    return out


def test_two_shifted_intervals():
    assert perm_prob_exact([E.uniform(0, 1), E.uniform(F(1, 2), F(3, 2))], [1, 0]) == F(1, 8)
    assert perm_prob_exact([E.uniform(0, 1), E.uniform(2, 3)], [1, 0]) == 0


def test_iid_uniform_orderings():
    dist = perm_distribution_exact(iid_uniform(3))
    assert set(dist.values()) == {F(1, 6)}


def test_atoms_and_densities_mix():
    # X is 0 or 1 with prob 1/2, Y uniform on [0,1]: P(X < Y) = 1/2
    x = E([(F(0), F(1, 2)), (F(1), F(1, 2))], [])
    assert perm_prob_exact([x, E.uniform(0, 1)], [0, 1]) == F(1, 2)


def test_max_of_uniforms_density():
    mu = E.max_of_uniforms(2, 0)
    assert mu.total_mass() == 1
    # P(max of two uniforms < an independent uniform) = 1/3
    assert perm_prob_exact([mu, E.uniform(0, 1)], [0, 1]) == F(1, 3)


def test_collision_rejected():
    with pytest.raises(CollisionError):
        perm_prob_exact([E.point(F(1, 2)), E.point(F(1, 2))], [0, 1])
    with pytest.raises(ValueError):
        perm_prob_exact([E.uniform(0, 1, mass=F(1, 2)), E.uniform(0, 1)], [0, 1])


@settings(max_examples=30, deadline=None)
@given(interval_measures(3))
def test_ordering_law_sums_to_one(ms):
    dist = perm_distribution_exact(ms)
    assert sum(dist.values()) == 1
    assert all(p >= 0 for p in dist.values())


@settings(max_examples=30, deadline=None)
@given(interval_measures(3))
def test_ordering_law_matches_symbolic_pair_marginals(ms):
    # the pairwise marginal from the full law equals the two-variable computation
    dist = perm_distribution_exact(ms)
    for i, j in itertools.combinations(range(3), 2):
        marg = sum(p for s, p in dist.items() if s.index(i) < s.index(j))
        assert marg == perm_prob_exact([ms[i], ms[j]], [0, 1])


def test_iid_tree_law_equals_mst():
    for g in (square_with_diagonal(), cycle_graph(5), complete_graph(4)):
        assert tree_distribution_exact(g, iid_uniform(g.m)) == mst_distribution(g)


def test_shifted_diagonal_kills_diagonal_trees():
    g = square_with_diagonal()
    dist = tree_distribution_exact(g, shift_measures([0, 0, 0, 0, 1]))
    diag = g.edge_index(0, 2)
    assert all(p == (0 if diag in t else F(1, 4)) for t, p in dist.items())


def test_k4_intro_measure_is_uniform():
    dist = tree_distribution_exact(complete_graph(4), k4_intro_measures())
    assert set(dist.values()) == {F(1, 16)}


def test_edge_cap():
    with pytest.raises(ResourceCapError):
        tree_distribution_exact(complete_graph(5), iid_uniform(10))


def test_measure_json_roundtrip():
    mu = E([(F(1, 3), F(1, 4))], [(F(0), F(1), [F(3, 4)])])
    assert E.from_json(mu.to_json()).to_json() == mu.to_json()


def test_closing_gaps_and_shiftahedron():
    assert closing_gaps([0, 5]) == [0, 1]
    assert closing_gaps([0, F(5, 2), F(3, 10)]) == [F(7, 15), F(53, 30), F(23, 30)]
    assert shiftahedron_contains([0, 1, 2])
    assert not shiftahedron_contains([0, 0, 6])
    assert shiftahedron_contains([1, 2, 3], total=6)
    assert shiftahedron_contains([2, 2, 2], total=6)


def test_theta_221_values():
    rep = theta_report(2, 2, 1)
    assert rep["mst0_per_tree"] == {"R": F(7, 60), "S": F(7, 60), "T": F(2, 15)}
    assert rep["gap_per_tree"] == F(1, 120)
    assert rep["gap_per_type"] == F(1, 60)
    assert rep["gap_displayed_formula"] == F(1, 12)


def test_theta_212_fast_matches_full():
    rep = theta_report(2, 1, 2, shifts=(0, 0, 0))
    assert rep["mst0_per_type"]["S"] == F(8, 15)
    assert rep["shifted_per_type"] == rep["shifted_per_type_full"]


@pytest.mark.parametrize("r", [1, 2])
def test_equal_arms_give_ust(r):
    probs = theta_type_probs_shifted(r, r, r)
    assert set(probs.values()) == {F(1, 3)}


def test_total_variation():
    assert total_variation({1: F(1, 2), 2: F(1, 2)}, {1: F(1)}) == F(1, 2)


def test_quintic_root_bracket():
    assert quintic(F(3, 100)) < 0 < quintic(F(4, 100))


def test_snowman():
    assert not is_snowman_free(theta_graph(7, 1, 5))
    assert is_snowman_free(theta_graph(2, 2, 2))
    assert is_snowman_free(theta_graph(3, 3, 3))
    u, v, arms = find_snowman(complete_graph(4))
    assert len(set(arms)) > 1
    assert is_snowman_free(cycle_graph(6))
