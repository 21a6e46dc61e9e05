"""Weighted words and the distributions they induce on orderings.

A word map is a word over symbols 0..m-1 with a nonnegative weight per
position.  Drawing one position per symbol, independently and proportional
to weight, spells an ordering (lowest first).  Orderings are tuples of
symbols; ``all_orderings(m)`` fixes the column order used everywhere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

LETTERS = "abcdefghijklmnopqrstuvwxyz"
MAX_SYMBOLS = 7


def all_orderings(m: int) -> list:
    return list(itertools.permutations(range(m)))


def word_from_string(text: str) -> tuple:
    return tuple(LETTERS.index(ch) for ch in text)


def word_to_string(word: Sequence[int]) -> str:
    return "".join(LETTERS[x] for x in word)


def ordering_to_string(sigma: Sequence[int]) -> str:
    return word_to_string(sigma)


@dataclass(frozen=True)
class WordMap:
    word: tuple
    weights: tuple

    def __init__(self, word, weights=None):
        word = word_from_string(word) if isinstance(word, str) else tuple(int(x) for x in word)
        if weights is None:
            weights = (1,) * len(word)
        weights = tuple(w if isinstance(w, (int, float, Fraction)) else Fraction(str(w))
                        for w in weights)
        if len(weights) != len(word):
            raise ValueError("one weight per position")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "weights", weights)
        for a in range(self.m):
            if not self.total(a) > 0:
                raise ValueError(f"symbol {LETTERS[a]} has zero total weight")

    @property
    def m(self) -> int:
        return max(self.word) + 1 if self.word else 0

    def total(self, a: int):
        return sum(w for x, w in zip(self.word, self.weights) if x == a)

    def positions(self, a: int) -> list:
        return [i for i, x in enumerate(self.word) if x == a]

    def __len__(self):
        return len(self.word)

    def __str__(self):
        parts = []
        for x, w in zip(self.word, self.weights):
            parts.append(LETTERS[x] if w == 1 else f"{LETTERS[x]}^{w}")
        return " ".join(parts)

    def to_json(self) -> dict:
        def fmt(w):
            if isinstance(w, float):
                return w
            w = Fraction(w)
            return f"{w.numerator}/{w.denominator}"
        return {"word": word_to_string(self.word), "weights": [fmt(w) for w in self.weights]}

    @classmethod
    def from_json(cls, data) -> "WordMap":
        weights = data.get("weights")
        if weights is not None:
            weights = [w if isinstance(w, float) else Fraction(str(w)) for w in weights]
        return cls(data["word"], weights)


def _count_spellings(word, weights, sigma):
    # weighted number of subsequences of word spelling sigma
    f = [0] * (len(sigma) + 1)
    f[0] = 1
    where = {a: k for k, a in enumerate(sigma)}
    for x, w in zip(word, weights):
        k = where.get(x)
        if k is not None and w:
            f[k + 1] += f[k] * w
    return f[len(sigma)]


def word_distribution(wm: WordMap) -> dict:
    """Exact law on orderings (floats in, floats out).

    Every ordering uses each symbol once, so the normalizing product of
    symbol totals is common to all orderings and is divided out at the end.
    """
    m = wm.m
    if m > MAX_SYMBOLS:
        raise ValueError(f"m={m} exceeds {MAX_SYMBOLS}")
    denom = 1
    for a in range(m):
        denom *= wm.total(a)
    exact = not any(isinstance(w, float) for w in wm.weights)
    out = {}
    for sigma in all_orderings(m):
        num = _count_spellings(wm.word, wm.weights, sigma)
        out[sigma] = Fraction(num) / denom if exact else num / denom
    return out


def uniform_orderings(m: int) -> dict:
    return {s: Fraction(1, math.factorial(m)) for s in all_orderings(m)}


def is_uniform(dist: dict, tol: float = 0.0) -> bool:
    m = len(next(iter(dist)))
    u = Fraction(1, math.factorial(m))
    if tol == 0:
        return all(p == u for p in dist.values())
    return 0.5 * sum(abs(float(p) - float(u)) for p in dist.values()) < tol


# ---- draw matrices and rank -------------------------------------------

def draw_matrix(word) -> list:
    """Row i, column sigma: number of spellings of sigma that use position i."""
    word = word_from_string(word) if isinstance(word, str) else tuple(word)
    m = max(word) + 1
    if set(word) != set(range(m)):
        raise ValueError("every symbol must appear")
    if m > MAX_SYMBOLS:
        raise ValueError(f"m={m} exceeds {MAX_SYMBOLS}")
    r = len(word)
    cols = all_orderings(m)
    mat = [[0] * len(cols) for _ in range(r)]
    for c, sigma in enumerate(cols):
        where = {a: k for k, a in enumerate(sigma)}
        # pre[i][k]: spellings of sigma[:k] inside word[:i]
        pre = [[0] * (m + 1) for _ in range(r + 1)]
        pre[0][0] = 1
        for i, x in enumerate(word):
            pre[i + 1] = list(pre[i])
            k = where[x]
            pre[i + 1][k + 1] += pre[i][k]
        suf = [[0] * (m + 1) for _ in range(r + 1)]
        suf[r][m] = 1
        for i in range(r - 1, -1, -1):
            suf[i] = list(suf[i + 1])
            k = where[word[i]]
            suf[i][k] += suf[i + 1][k + 1]
        for i, x in enumerate(word):
            k = where[x]
            mat[i][c] = pre[i][k] * suf[i + 1][k + 1]
    return mat


def _integer_rows(matrix) -> list:
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    return rows


def rational_rank(matrix) -> int:
    """Exact rank by fraction-free elimination."""
    a = _integer_rows(matrix)
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, rows):
            if a[i][c]:
                f = a[i][c]
                a[i] = [(p * a[i][j] - f * a[rank][j]) // prev for j in range(cols)]
            else:
                a[i] = [(p * a[i][j]) // prev for j in range(cols)]
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def rank_mod_p(matrix, p: int = 2_147_483_647) -> int:
    """Rank over GF(p); never exceeds the rational rank."""
    a = np.array(_integer_rows(matrix), dtype=object) % p
    a = a.astype(np.int64)
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        nz = np.nonzero(a[rank:, c])[0]
        if len(nz) == 0:
            continue
        piv = rank + nz[0]
        a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = np.nonzero(a[rank + 1:, c])[0] + rank + 1
        for i in below:
            f = int(a[i, c])
            a[i] = (a[i] - f * a[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


# ---- shortening --------------------------------------------------------

def _null_vector(rows) -> list | None:
    """Some nonzero rational x with rows @ x = 0, or None."""
    a = [[Fraction(x) for x in row] for row in rows]
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    x = [Fraction(0)] * ncols
    x[free[0]] = Fraction(1)
    for i, c in enumerate(pivots):
        x[c] = -a[i][free[0]]
    return x


def _drop_zero_positions(word, weights):
    keep = [i for i, w in enumerate(weights) if w != 0]
    return tuple(word[i] for i in keep), tuple(weights[i] for i in keep)


def shorten_word_map(wm: WordMap) -> WordMap:
    """Same law, at most m! positions per symbol.

    For one symbol at a time, the law is a convex combination of the laws
    conditioned on each of its positions.  While those conditional laws are
    affinely dependent, mass is moved along the dependency until some
    position's weight hits zero, and that position is dropped.
    """
    m = wm.m
    if m > 5:
        raise ValueError("shortening is limited to m <= 5")
    word, weights = _drop_zero_positions(wm.word, tuple(Fraction(w) for w in wm.weights))
    for a in range(m):
        while True:
            pos = [i for i, x in enumerate(word) if x == a]
            if len(pos) == 1:
                break
            cond = []
            for j in pos:
                w = tuple(weights[i] if word[i] != a else Fraction(int(i == j)) for i in range(len(word)))
                dist = word_distribution(WordMap(word, w))
                cond.append([dist[s] for s in all_orderings(m)])
            rows = [[cond[k][c] for k in range(len(pos))] for c in range(len(cond[0]))]
            rows.append([Fraction(1)] * len(pos))
            c = _null_vector(rows)
            if c is None:
                break
            tot = sum(weights[j] for j in pos)
            lam = [weights[j] / tot for j in pos]
            if not any(x > 0 for x in c):
                c = [-x for x in c]
            t = min(lam[k] / c[k] for k in range(len(pos)) if c[k] > 0)
            new = list(weights)
            for k, j in enumerate(pos):
                new[j] = (lam[k] - t * c[k]) * tot
            word, weights = _drop_zero_positions(word, tuple(new))
    return WordMap(word, weights)


# ---- universal words ---------------------------------------------------

def universal_word(m: int) -> tuple:
    if not 2 <= m <= MAX_SYMBOLS:
        raise ValueError("m must be between 2 and 7")
    length = math.factorial(m) * m * (m - 1) + 1
    return tuple(i % m for i in range(length))


def merge_repeats(wm: WordMap) -> WordMap:
    """Fuse adjacent equal letters; the induced law is unchanged."""
    word, weights = [], []
    for x, w in zip(wm.word, wm.weights):
        if word and word[-1] == x:
            weights[-1] += w
        else:
            word.append(x)
            weights.append(w)
    return WordMap(word, weights)


def embed_in_universal(wm: WordMap) -> WordMap:
    """Place wm inside the universal word, zero weight elsewhere.

    Words longer than m! m letters (after merging repeats) are shortened
    first; the universal word has room for any word within that bound.
    """
    m = wm.m
    short = merge_repeats(wm)
    if len(short) > math.factorial(m) * m:
        short = merge_repeats(shorten_word_map(wm))
    u = universal_word(m)
    weights = [0] * len(u)
    i = 0
    for x, w in zip(short.word, short.weights):
        while i < len(u) and u[i] != x:
            i += 1
        if i == len(u):
            raise ValueError("word does not fit in the universal word")
        weights[i] = w
        i += 1
    return WordMap(u, weights)


# ---- uniform words -----------------------------------------------------

def relabel(word: Sequence[int], sigma: Sequence[int]) -> tuple:
    return tuple(sigma[x] for x in word)


def uniform_word_recursive(m: int) -> WordMap:
    if m > 4:
        raise ValueError("length cap: m must be at most 4")
    v = tuple(range(m))
    for _ in range(m - 1):
        v = tuple(itertools.chain.from_iterable(relabel(v, s) for s in all_orderings(m)))
    return WordMap(v)


def quadrature_length(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    length = 1
    for k in range(2, m + 1):
        if k % 2:
            length = (k + 1) // 2 * length + (k + 1) // 2
        else:
            length = k // 2 * length + (k + 2) // 2
    return length


_EXACT_SCHEMES = {
    1: ([Fraction(0), Fraction(1)], [Fraction(1, 2), Fraction(1, 2)]),
    2: ([Fraction(0), Fraction(2, 3)], [Fraction(1, 4), Fraction(3, 4)]),
    3: ([Fraction(0), Fraction(1, 2), Fraction(1)], [Fraction(1, 6), Fraction(2, 3), Fraction(1, 6)]),
}


def quadrature_scheme(degree: int, tol: float = 1e-12) -> tuple:
    """Nodes and weights on [0,1] exact for polynomials up to ``degree``.

    Even degree: Radau (left end fixed at 0).  Odd degree: Lobatto (both
    ends fixed).  Low degrees are exact rationals; higher ones come from
    Newton's method on the moment equations.
    """
    if degree in _EXACT_SCHEMES:
        return _EXACT_SCHEMES[degree]
    if degree % 2 == 0:
        r = (degree + 2) // 2
        fixed = [0.0]
    else:
        r = (degree + 3) // 2
        fixed = [0.0, 1.0]
    nfree = r - len(fixed)
    if degree % 2 == 0:
        x = np.linspace(0, 1, r + 1)[1:r]
    else:
        x = np.linspace(0, 1, r)[1:-1]
    a = np.full(r, 1.0 / r)
    targets = np.array([1.0 / (j + 1) for j in range(degree + 1)])

    def nodes(x):
        return np.concatenate([[0.0], x]) if degree % 2 == 0 else np.concatenate([[0.0], x, [1.0]])

    def resid(v):
        xs, ws = nodes(v[:nfree]), v[nfree:]
        return np.array([ws @ xs ** j for j in range(degree + 1)]) - targets

    v = np.concatenate([x, a])
    for _ in range(100):
        f = resid(v)
        if np.max(np.abs(f)) < tol * 1e-2:
            break
        jac = np.empty((degree + 1, len(v)))
        h = 1e-7
        for k in range(len(v)):
            dv = np.zeros_like(v)
            dv[k] = h
            jac[:, k] = (resid(v + dv) - resid(v - dv)) / (2 * h)
        v = v - np.linalg.solve(jac, f)
    res = float(np.max(np.abs(resid(v))))
    if res >= tol:
        raise ArithmeticError(f"moment residual {res:.2e} above {tol}")
    xs, ws = nodes(v[:nfree]), v[nfree:]
    if np.any(ws <= 0) or np.any(np.diff(xs) <= 0):
        raise ArithmeticError("quadrature scheme is not admissible")
    return [float(t) for t in xs], [float(t) for t in ws]


def _scaled(word, weights, c):
    return list(word), [w * c for w in weights]


def quadrature_step(inner: WordMap, nodes, weights) -> WordMap:
    """Interleave scaled copies of ``inner`` with a new top symbol."""
    new = inner.m
    word, wts = [], []
    prev = 0
    for x, a in zip(nodes, weights):
        gap = x - prev
        if gap:
            w, ws = _scaled(inner.word, inner.weights, gap)
            word += w
            wts += ws
        word.append(new)
        wts.append(a)
        prev = x
    gap = 1 - prev
    if gap:
        w, ws = _scaled(inner.word, inner.weights, gap)
        word += w
        wts += ws
    return WordMap(word, wts)


def _normalize_per_symbol(wm: WordMap) -> WordMap:
    # homogeneous weights: scale each symbol to integers when exact
    if any(isinstance(w, float) for w in wm.weights):
        return wm
    scale = {}
    for a in range(wm.m):
        ws = [Fraction(wm.weights[i]) for i in wm.positions(a)]
        den = math.lcm(*(w.denominator for w in ws))
        num = math.gcd(*(int(w * den) for w in ws))
        scale[a] = Fraction(den, num)
    return WordMap(wm.word, [Fraction(w) * scale[x] for x, w in zip(wm.word, wm.weights)])


def uniform_word_quadrature(m: int) -> WordMap:
    """Uniform word of length quadrature_length(m), built one symbol at a time."""
    if not 1 <= m <= 5:
        raise ValueError("m must be between 1 and 5")
    wm = WordMap((0,), (Fraction(1),))
    for k in range(1, m):
        nodes, weights = quadrature_scheme(k)
        wm = quadrature_step(wm, nodes, weights)
    return _normalize_per_symbol(wm)


# ---- (k, l)-uniformity -------------------------------------------------

def interleaving_distribution(wm: WordMap, k: int, l: int) -> dict:
    """Law of the A/B pattern from k draws of symbol 0 and l draws of symbol 1."""
    if wm.m != 2:
        raise ValueError("need a word on two symbols")
    tot = [wm.total(0), wm.total(1)]
    exact = not any(isinstance(w, float) for w in wm.weights)
    one = Fraction(1) if exact else 1.0
    # state: (a used, b used, pattern) -> sum of prod p^c / c!
    states = {(0, 0, ""): one}
    for x, w in zip(wm.word, wm.weights):
        p = (Fraction(w) if exact else w) / tot[x]
        nxt = {}
        for (a, b, pat), val in states.items():
            left = (k - a) if x == 0 else (l - b)
            term = val
            for c in range(left + 1):
                if c:
                    term = term * p / c
                key = (a + c, b, pat + "A" * c) if x == 0 else (a, b + c, pat + "B" * c)
                nxt[key] = nxt.get(key, 0) + term
        states = nxt
    out = {}
    mult = math.factorial(k) * math.factorial(l)
    for (a, b, pat), val in states.items():
        if a == k and b == l:
            out[pat] = val * mult
    return out


def kl_uniform_check(wm: WordMap, k: int, l: int, tol: float = 0.0) -> bool:
    if k + l > 8:
        raise ValueError("k + l must be at most 8")
    dist = interleaving_distribution(wm, k, l)
    target = Fraction(1, math.comb(k + l, l))
    pats = {"".join(p) for p in itertools.product("AB", repeat=k + l)
            if p.count("A") == k}
    if tol == 0:
        return all(dist.get(p, 0) == target for p in pats)
    return all(abs(float(dist.get(p, 0)) - float(target)) < tol for p in pats)
