import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelaw.word_maps import (
    WordMap,
    all_orderings,
    draw_matrix,
    embed_in_universal,
    interleaving_distribution,
    is_uniform,
    kl_uniform_check,
    merge_repeats,
    quadrature_length,
    quadrature_scheme,
    rank_mod_p,
    rational_rank,
    shorten_word_map,
    uniform_word_quadrature,
    uniform_word_recursive,
    universal_word,
    word_distribution,
    word_from_string,
    word_to_string,
)

F = Fraction


@st.composite
def word_maps(draw, m_max=3, extra=6):
    m = draw(st.integers(2, m_max))
    word = list(range(m)) + draw(st.lists(st.integers(0, m - 1), max_size=extra))
    word = draw(st.permutations(word))
    weights = draw(st.lists(st.integers(1, 5), min_size=len(word), max_size=len(word)))
    return WordMap(list(word), weights)


def test_two_symbol_example():
    d = word_distribution(WordMap("abab", [2, 1, 1, 2]))
    assert d == {(0, 1): F(8, 9), (1, 0): F(1, 9)}


def test_string_forms():
    wm = WordMap("abab", [2, 1, 1, 2])
    assert str(wm) == "a^2 b a b^2"
    assert WordMap.from_json(wm.to_json()) == wm
    assert word_to_string(word_from_string("cab")) == "cab"


def test_bad_word_maps():
    with pytest.raises(ValueError):
        WordMap("ab", [1])
    with pytest.raises(ValueError):
        WordMap("ab", [1, 0])


@settings(max_examples=40, deadline=None)
@given(word_maps())
def test_distribution_is_a_law(wm):
    d = word_distribution(wm)
    assert sum(d.values()) == 1
    assert set(d) <= set(all_orderings(wm.m))


@settings(max_examples=40, deadline=None)
@given(word_maps(), st.integers(1, 7))
def test_per_symbol_scaling_invariance(wm, c):
    scaled = WordMap(wm.word, [w * c if x == 0 else w for x, w in zip(wm.word, wm.weights)])
    assert word_distribution(scaled) == word_distribution(wm)


@settings(max_examples=30, deadline=None)
@given(word_maps())
def test_merge_and_embed_preserve_law(wm):
    d = word_distribution(wm)
    assert word_distribution(merge_repeats(wm)) == d
    assert word_distribution(embed_in_universal(wm)) == d


@settings(max_examples=30, deadline=None)
@given(word_maps())
def test_draw_matrix_column_sums(wm):
    # each subsequence spelling an ordering passes through exactly m positions,
    # and with unit weights P(sigma) = spellings / product of letter counts
    word = wm.word
    mat = draw_matrix(word)
    unit = word_distribution(WordMap(word))
    mult = math.prod(word.count(a) for a in range(wm.m))
    for j, sigma in enumerate(all_orderings(wm.m)):
        col = sum(row[j] for row in mat)
        assert col % wm.m == 0
        assert F(col // wm.m, mult) == unit.get(sigma, 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_ranks_agree(rows):
    r = rational_rank(rows)
    assert r == np.linalg.matrix_rank(np.array(rows, dtype=float))
    assert rank_mod_p(rows) == r


def test_shorten_keeps_law():
    wm = WordMap("ababab")
    short = shorten_word_map(wm)
    assert len(short) <= 3
    assert word_distribution(short) == word_distribution(wm)


@settings(max_examples=15, deadline=None)
@given(word_maps(m_max=3, extra=10))
def test_shorten_property(wm):
    short = shorten_word_map(wm)
    assert word_distribution(short) == word_distribution(wm)
    assert len(short) <= len(merge_repeats(wm))


def test_universal_word_length():
    assert len(universal_word(3)) == 37
    with pytest.raises(ValueError):
        universal_word(8)


def test_recursive_uniform_words():
    for m, length in [(2, 4), (3, 108)]:
        wm = uniform_word_recursive(m)
        assert len(wm) == length
        assert is_uniform(word_distribution(wm))


def test_quadrature_words():
    lengths = [len(uniform_word_quadrature(m)) for m in range(1, 6)]
    assert lengths == [quadrature_length(m) for m in range(1, 6)] == [1, 3, 8, 19, 60]
    for m in (2, 3, 4):
        assert is_uniform(word_distribution(uniform_word_quadrature(m)))
    assert is_uniform(word_distribution(uniform_word_quadrature(5)), tol=1e-9)


def test_small_words_match_reference_table():
    assert str(uniform_word_quadrature(1)) == "a"
    assert str(uniform_word_quadrature(2)) == "b a b"
    assert str(uniform_word_quadrature(3)) == "c b^2 a^2 b^2 c^3 b a b"
    assert str(uniform_word_quadrature(4)) == (
        "d c b^2 a^2 b^2 c^3 b a b d^4 c b^2 a^2 b^2 c^3 b a b d")


@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
def test_quadrature_exactness(degree):
    xs, ws = quadrature_scheme(degree)
    for j in range(degree + 1):
        val = sum(w * x ** j for x, w in zip(xs, ws))
        assert abs(float(val) - 1 / (j + 1)) < 1e-12
    assert xs[0] == 0


def test_radau_pair_is_21_uniform():
    wm = WordMap("baba", [F(1, 4), F(2, 3), F(3, 4), F(1, 3)])
    assert kl_uniform_check(wm, 2, 1)
    assert not kl_uniform_check(WordMap("ab"), 1, 1)
    assert kl_uniform_check(WordMap("aba"), 1, 1)
    assert sum(interleaving_distribution(wm, 2, 1).values()) == 1
