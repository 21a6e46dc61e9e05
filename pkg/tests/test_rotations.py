from fractions import Fraction

import pytest

from fixtures_lib import folded_trace_instance, entangled_state_setup
from treelaw import rotations as rot
from treelaw.graph_core import (
    GraphError,
    ResourceCapError,
    complete_graph,
    path_tree,
    square_with_diagonal,
    star_tree,
)
from treelaw.mst_exact import mst_prob

F = Fraction


def test_star_to_path_is_strictly_expanding():
    k5 = complete_graph(5)
    star, path = star_tree(k5), path_tree(k5, range(5))
    beta = rot.find_cycle_expanding_bijection(k5, star, path)
    assert beta is not None
    assert rot.cycle_expanding_check(k5, star, path, beta) is rot.Expansion.STRICT
    assert mst_prob(k5, star) > mst_prob(k5, path)


def test_beta_must_carry_tree_onto_tree():
    g = square_with_diagonal()
    with pytest.raises(GraphError):
        rot.cycle_expanding_check(g, (0, 1, 2), (0, 2, 4), list(range(g.m)))


def test_no_expansion_from_path_to_star():
    k5 = complete_graph(5)
    star, path = star_tree(k5), path_tree(k5, range(5))
    assert rot.find_cycle_expanding_bijection(k5, path, star) is None
    beta = rot.find_cycle_expanding_bijection(k5, star, path)
    inverse = [0] * k5.m
    for a, b in enumerate(beta):
        inverse[b] = a
    assert rot.cycle_expanding_check(k5, path, star, inverse) is rot.Expansion.NOT_EXPANDING


def test_degree_product():
    k5 = complete_graph(5)
    assert rot.degree_product(k5, star_tree(k5)) == 4
    assert rot.degree_product(k5, path_tree(k5, range(5))) == 8


def test_triangle_sites_on_house():
    h = rot.house_graph()
    sites = rot.triangle_rotation_sites(h)
    assert sites
    for site in sites:
        beta = site.beta
        assert rot.cycle_expanding_check(h, site.s, site.s_prime, beta) is not rot.Expansion.NOT_EXPANDING
        assert mst_prob(h, site.s) > mst_prob(h, site.s_prime)


def test_witness_is_exactly_verified():
    w = rot.random_graph_witness(7, 0.5, 1, "proof")
    assert w is not None
    assert w.p_s > w.p_s_prime
    assert mst_prob(w.graph, w.s) == w.p_s
    assert w.to_json()["p_S"] == f"{w.p_s.numerator}/{w.p_s.denominator}"


def test_witness_none_for_disconnected_sample():
    import numpy as np
    seeds = [s for s in range(40) if not rot.gnp_graph(7, 0.5, np.random.default_rng(s)).is_connected()]
    assert seeds
    assert rot.random_graph_witness(7, 0.5, seeds[0], "exact") is None


def test_k4_path_rotation_matches_exact():
    inst = rot.PathRotation(4, [(0, 2)], [0, 1], [(0, 3)])
    p, pp = inst.probabilities()
    assert (p, pp) == (mst_prob(inst.g, inst.t), mst_prob(inst.g, inst.t_prime))


def test_all_k5_instances():
    n = 0
    for inst in rot.enumerate_path_rotations(5):
        p, pp = inst.probabilities()
        assert (p, pp) == (mst_prob(inst.g, inst.t), mst_prob(inst.g, inst.t_prime))
        assert p > pp
        n += 1
    assert n == 20


def test_literal_rules_go_wrong_on_k6():
    args = ([(0, 4)], [0, 1, 2, 3], [(0, 5)])
    fixed = rot.PathRotation(6, *args)
    literal = rot.PathRotation(6, *args, literal=True)
    exact = (mst_prob(fixed.g, fixed.t), mst_prob(fixed.g, fixed.t_prime))
    assert fixed.probabilities() == exact
    assert literal.probabilities() != exact


def test_folded_trace():
    inst, seq = folded_trace_instance()
    trace = inst.run(seq)
    qs = [(q, qp) for _, _, q, qp in trace]
    assert qs[1] == (1, 1)
    assert qs[2] == (F(1, 4), F(1, 4))
    assert qs[4] == (F(1, 4), F(1, 4))
    assert qs[5] == (F(1, 8), F(1, 8))
    assert qs[7] == (F(1, 8), 0)
    assert rot.folded_oracle(inst, seq) == qs


def test_entanglement_row():
    inst, c, s0, counts, q0 = entangled_state_setup()
    fq, fqp, s = inst.step(s0, counts, c(4, 6))
    assert (q0 * fq, q0 * fqp) == (F(1, 16), F(1, 16))
    assert s[3] == s[4] == s[5] == frozenset({4, 5, 6})


def test_normalized_rotation_accepts_either_end():
    a = rot.normalized_rotation(5, [[4, 0]], [0, 1, 2], [[2, 3]])
    b = rot.normalized_rotation(5, [[4, 0]], [0, 1, 2], [[0, 3]])
    c = rot.normalized_rotation(5, [[4, 2]], [0, 1, 2], [[0, 3]])
    assert a.t == b.t
    assert a.probabilities() == (F(127, 15120), F(113, 15120))
    assert c.probabilities() == a.probabilities()


def test_bad_instances():
    with pytest.raises(GraphError):
        rot.PathRotation(5, [(0, 1)], [0, 1, 2], [(0, 3)])
    with pytest.raises(GraphError):
        rot.PathRotation(5, [(0, 3)], [0, 1, 2], [(0, 3)])
    with pytest.raises(ResourceCapError):
        rot.PathRotation(5, [(0, 3)], [0, 1, 2], [(0, 4)]).probabilities(cap=5)
