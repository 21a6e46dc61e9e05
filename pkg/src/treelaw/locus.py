"""Geometry of the set of ordering laws reachable by independent variables.

Orderings are tuples of 0-based symbols, lowest first.  Formal combinations
of orderings (``OrderingVector``) are plain dicts {ordering: coefficient}.
Permutations in cycle notation are parsed and printed 1-based, e.g. "(12)(34)".
"""

from __future__ import annotations

import itertools
import math
import random
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .word_maps import (
    WordMap,
    all_orderings,
    draw_matrix,
    rank_mod_p,
    rational_rank,
    word_distribution,
)


# ---- pairwise region for three variables -------------------------------

def trybula_contains(x, y, z) -> bool:
    """Pairwise probabilities P(X1>X2), P(X2>X3), P(X3>X1) reachable?"""
    x, y, z = (Fraction(str(v)) if not isinstance(v, Fraction) else v for v in (x, y, z))
    if not all(0 <= v <= 1 for v in (x, y, z)):
        raise ValueError("coordinates must lie in [0, 1]")
    xb, yb, zb = 1 - x, 1 - y, 1 - z
    return (min(x + y * z, y + x * z, z + x * y) <= 1
            and min(xb + yb * zb, yb + xb * zb, zb + xb * yb) <= 1)


def trybula_grid(steps: int = 20) -> list:
    """Grid scan (x, y, z, inside) for plotting."""
    out = []
    for i, j, k in itertools.product(range(steps + 1), repeat=3):
        p = (Fraction(i, steps), Fraction(j, steps), Fraction(k, steps))
        out.append((*p, trybula_contains(*p)))
    return out


# ---- counting ----------------------------------------------------------

def pure_cycle_count(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    return sum(math.factorial(m) // (k * math.factorial(m - k)) for k in range(2, m + 1))


def cycles_of(perm: Sequence[int]) -> list:
    """Cycle normal form: each cycle starts at its least element, cycles by that element."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        out.append(tuple(cyc))
    return out


def nontrivial_cycle_count(perm: Sequence[int]) -> int:
    return sum(1 for c in cycles_of(perm) if len(c) > 1)


def cycle_type_census(m: int) -> dict:
    """How many permutations have 0, 1, or >= 2 nontrivial cycles."""
    counts = {"identity": 0, "pure": 0, "multi": 0}
    for p in itertools.permutations(range(m)):
        k = nontrivial_cycle_count(p)
        counts["identity" if k == 0 else "pure" if k == 1 else "multi"] += 1
    return counts


def parse_cycles(text: str, m: int | None = None) -> list:
    """Parse "(12)(345)" or "(1 2)(3 4 5)" (1-based) into a permutation list."""
    groups = re.findall(r"\(([^()]*)\)", text)
    if not groups and text.strip() not in ("", "()", "e", "id"):
        raise ValueError(f"cannot parse cycles from {text!r}")
    cycles = []
    for g in groups:
        parts = g.replace(",", " ").split()
        if len(parts) == 1 and len(parts[0]) > 1:
            parts = list(parts[0])
        cycles.append([int(p) - 1 for p in parts])
    used = [x for c in cycles for x in c]
    if len(set(used)) != len(used) or any(x < 0 for x in used):
        raise ValueError("cycles must be disjoint with positive entries")
    size = max(used, default=-1) + 1
    if m is None:
        m = size
    if size > m:
        raise ValueError("cycle entry exceeds m")
    perm = list(range(m))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            perm[a] = b
    return perm


def format_cycles(perm: Sequence[int]) -> str:
    cyc = [c for c in cycles_of(perm) if len(c) > 1]
    if not cyc:
        return "()"
    return "".join("(" + "".join(str(x + 1) for x in c) + ")" for c in cyc)


# ---- formal combinations of orderings ----------------------------------

def _clean(v: dict) -> dict:
    return {k: c for k, c in v.items() if c != 0}


def add(u: dict, v: dict, scale=1) -> dict:
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, 0) + scale * c
    return _clean(out)


def concat(u: dict, v: dict) -> dict:
    out = {}
    for a, ca in u.items():
        for b, cb in v.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
    return _clean(out)


def _interleavings(a: tuple, b: tuple):
    n = len(a) + len(b)
    for slots in itertools.combinations(range(n), len(a)):
        it_a, it_b = iter(a), iter(b)
        chosen = set(slots)
        yield tuple(next(it_a) if i in chosen else next(it_b) for i in range(n))


def shuffle_product(u: dict, v: dict) -> dict:
    syms_u = {s for k in u for s in k}
    syms_v = {s for k in v for s in k}
    if syms_u & syms_v:
        raise ValueError("shuffle needs disjoint symbol sets")
    out = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for w in _interleavings(a, b):
                out[w] = out.get(w, 0) + ca * cb
    return _clean(out)


def bracket(u: dict, v: dict) -> dict:
    return add(concat(u, v), concat(v, u), -1)


def cycle_vector(cycle: Sequence[int]) -> dict:
    """Left-nested bracket [c1, c2, ..., cr] with c1 the least element."""
    c = list(cycle)
    k = c.index(min(c))
    c = c[k:] + c[:k]
    vec = {(c[0],): 1}
    for x in c[1:]:
        vec = bracket(vec, {(x,): 1})
    return vec


def lie_shuffle_vector(perm: Sequence[int]) -> dict:
    """Shuffle of the cycle brackets; fixed points enter as single letters.

    The identity is sent to the all-ones vector instead.
    """
    m = len(perm)
    cyc = cycles_of(perm)
    if all(len(c) == 1 for c in cyc):
        return {o: 1 for o in all_orderings(m)}
    vec = {(): 1}
    for c in cyc:
        vec = shuffle_product(vec, cycle_vector(c))
    return vec


def lie_basis_matrix(m: int) -> list:
    """Rows F(pi) for pi in lexicographic order, columns in ordering order."""
    if m > 5:
        raise ValueError("m must be at most 5")
    cols = all_orderings(m)
    rows = []
    for p in itertools.permutations(range(m)):
        vec = lie_shuffle_vector(p)
        rows.append([vec.get(o, 0) for o in cols])
    return rows


def lie_basis_rank(m: int) -> int:
    return rational_rank(lie_basis_matrix(m))


# ---- even/odd constraints ----------------------------------------------

def _restrict(order: tuple, symbols: set) -> tuple:
    return tuple(s for s in order if s in symbols)


def event_on(m: int, symbols: Iterable[int], sub_orders: Iterable[tuple]) -> frozenset:
    """All orderings of m symbols whose restriction to ``symbols`` is in sub_orders."""
    symbols = set(symbols)
    sub = set(sub_orders)
    return frozenset(o for o in all_orderings(m) if _restrict(o, symbols) in sub)


def events_from_cycles(perm: Sequence[int]) -> list:
    """(E+, E-) per nontrivial cycle: orderings whose restriction has sign +1 / -1."""
    m = len(perm)
    out = []
    for c in cycles_of(perm):
        if len(c) < 2:
            continue
        vec = cycle_vector(c)
        syms = set(c)
        plus = frozenset(o for o in all_orderings(m) if vec.get(_restrict(o, syms), 0) > 0)
        minus = frozenset(o for o in all_orderings(m) if vec.get(_restrict(o, syms), 0) < 0)
        out.append((plus, minus))
    return out


def _side_terms(events: list, parity: int) -> list:
    terms = []
    for signs in itertools.product((0, 1), repeat=len(events)):
        if sum(signs) % 2 != parity:
            continue
        # sign 0 means the + event
        sets = [events[i][1 if s else 0] for i, s in enumerate(signs)]
        terms.append(frozenset.intersection(*sets))
    return terms


def eo_constraint_residual(dist: dict, events: list):
    """Product over even compound events minus product over odd ones.

    A compound event takes E_i^+ for the chosen indices and E_i^- for the
    rest; "even" counts the number of + choices.
    """
    if len(events) < 2:
        raise ValueError("need at least two event pairs")
    for plus, minus in events:
        if plus & minus:
            raise ValueError("overlapping event pair")

    def prob(s):
        return sum((dist.get(o, 0) for o in s), Fraction(0) if not _is_float(dist) else 0.0)

    lhs = math.prod(prob(s) for s in _side_terms(events, 0))
    rhs = math.prod(prob(s) for s in _side_terms(events, 1))
    return lhs - rhs


def _is_float(dist: dict) -> bool:
    return any(isinstance(v, float) for v in dist.values())


def eo_gradient(events: list, m: int) -> dict:
    """Gradient of the even/odd residual at the uniform law, exactly."""
    u = Fraction(1, math.factorial(m))
    grad = {}
    for parity, sign in ((0, 1), (1, -1)):
        terms = _side_terms(events, parity)
        probs = [u * len(t) for t in terms]
        for i, t in enumerate(terms):
            others = math.prod(p for j, p in enumerate(probs) if j != i)
            for o in t:
                grad[o] = grad.get(o, 0) + sign * others
    return _clean(grad)


def eo_gradient_check(perm: Sequence[int], h: float = 1e-6, rel_tol: float = 1e-6) -> dict:
    """Gradient at the uniform law versus the shuffle of cycle brackets."""
    m = len(perm)
    if m > 5:
        raise ValueError("m must be at most 5")
    if nontrivial_cycle_count(perm) < 2:
        raise ValueError("need at least two nontrivial cycles")
    events = events_from_cycles(perm)
    grad = eo_gradient(events, m)
    target = lie_shuffle_vector(perm)
    cols = all_orderings(m)
    ratio = None
    proportional = set(grad) == set(target)
    if proportional:
        for o in cols:
            if o in target:
                r = Fraction(grad[o]) / target[o]
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    proportional = False
                    break
    # central differences on the float residual
    base = {o: 1.0 / math.factorial(m) for o in cols}
    worst = 0.0
    for o in cols:
        up, dn = dict(base), dict(base)
        up[o] += h
        dn[o] -= h
        fd = (eo_constraint_residual(up, events) - eo_constraint_residual(dn, events)) / (2 * h)
        exact = float(grad.get(o, 0))
        scale = max(abs(exact), max(abs(float(v)) for v in grad.values()))
        worst = max(worst, abs(fd - exact) / scale)
    return {
        "perm": format_cycles(perm),
        "proportional": proportional,
        "ratio": ratio,
        "finite_difference_rel_error": worst,
        "finite_difference_ok": worst < rel_tol,
    }


# ---- dimension bounds --------------------------------------------------

def random_word(m: int, length: int, seed: int = 0) -> tuple:
    """Concatenated random permutations of the alphabet, cut to length."""
    rng = random.Random(seed)
    word = []
    while len(word) < length:
        block = list(range(m))
        rng.shuffle(block)
        word += block
    return tuple(word[:length])


def draw_rank(word, exact: bool | None = None) -> int:
    mat = draw_matrix(word)
    if exact is None:
        exact = len(mat[0]) <= 120
    return rational_rank(mat) if exact else rank_mod_p(mat)


def dim_bounds_report(m: int, word=None, seeds: int = 5, exact: bool | None = None) -> dict:
    """Upper bound C(m) and the draw-matrix lower bound rank - 1.

    Without a word, pseudorandom words of length about 1.1 C(m) + m are
    tried for a few seeds and the best rank kept.  Ranks of large matrices
    are taken over a prime field, which can only undercount.
    """
    if m > 6:
        raise ValueError("m must be at most 6")
    upper = pure_cycle_count(m)
    if m == 1:
        return {"m": 1, "upper": 0, "lower": 0, "tight": True, "word": "a"}
    tried = []
    if word is not None:
        tried.append(tuple(word))
    else:
        length = int(1.1 * upper) + m
        tried.extend(random_word(m, length, seed) for seed in range(seeds))
    best, best_word = -1, None
    for w in tried:
        r = draw_rank(w, exact)
        if r > best:
            best, best_word = r, w
        if best - 1 >= upper:
            break
    from .word_maps import word_to_string
    return {
        "m": m,
        "upper": upper,
        "lower": best - 1,
        "tight": best - 1 == upper,
        "word": word_to_string(best_word),
        "rank_field": "Q" if (exact if exact is not None else len(all_orderings(m)) <= 120) else "GF(p)",
    }


def random_word_map_distribution(m: int, rng: random.Random, length: int | None = None) -> dict:
    length = length or 2 * m + rng.randrange(m + 1)
    word = list(range(m)) + [rng.randrange(m) for _ in range(length - m)]
    rng.shuffle(word)
    weights = [Fraction(rng.randint(1, 9)) for _ in word]
    return word_distribution(WordMap(word, weights))


def shiftahedron3_vertices() -> list:
    """Boundary vertices of the 3-variable shiftahedron, in angular order.

    Sorted gaps are each 0 or 1 (not both 0, which is the center); the
    coordinates are translated to sum 3.
    """
    verts = set()
    for gaps in ((0, 1), (1, 0), (1, 1)):
        base = [Fraction(0), Fraction(gaps[0]), Fraction(gaps[0] + gaps[1])]
        shift = (3 - sum(base)) / 3
        base = [b + shift for b in base]
        verts.update(itertools.permutations(base))

    def angle(p):
        # planar coordinates in the plane x + y + z = 3
        u = float(p[0] - p[1]) / math.sqrt(2)
        v = float(p[0] + p[1] - 2 * p[2]) / math.sqrt(6)
        return math.atan2(v, u)

    return sorted(verts, key=angle)
