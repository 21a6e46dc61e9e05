"""Exact order and tree probabilities for product measures on edge weights.

Each edge weight is a mixture of point masses and pieces with polynomial
densities on rational intervals.  Order probabilities are computed by
iterated integration on the common rational breakpoint grid, so every answer
is a ``Fraction``.  On top of that sit the shifted-interval tools: closing
gaps, shiftahedron membership, theta-graph formulas and a UST shift solver,
and the snowman-free predicate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx

from .graph_core import (
    Graph,
    GraphError,
    ResourceCapError,
    UnionFind,
    canonical,
    enumerate_spanning_trees,
    spanning_tree_count,
    theta_graph,
)

EXACT_EDGE_CAP = 8


class CollisionError(ValueError):
    pass


# ---- polynomials as coefficient lists, lowest degree first -------------

def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pscale(p, c):
    return [a * c for a in p]


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _pint(p):
    return [Fraction(0)] + [a / (i + 1) for i, a in enumerate(p)]


def _pder(p):
    return [a * i for i, a in enumerate(p)][1:]


def _peval(p, x):
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


# ---- edge measures -----------------------------------------------------

def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass
class EdgeMeasure:
    """Point masses plus pieces with polynomial density.

    ``pieces`` holds (a, b, coeffs): density sum coeffs[k] x^k on [a, b].
    """
    atoms: list = field(default_factory=list)
    pieces: list = field(default_factory=list)

    @classmethod
    def uniform(cls, a, b, mass=1) -> "EdgeMeasure":
        a, b, mass = _q(a), _q(b), _q(mass)
        return cls([], [(a, b, [mass / (b - a)])])

    @classmethod
    def shifted(cls, s) -> "EdgeMeasure":
        s = _q(s)
        return cls.uniform(s, s + 1)

    @classmethod
    def point(cls, loc) -> "EdgeMeasure":
        return cls([(_q(loc), Fraction(1))], [])

    @classmethod
    def max_of_uniforms(cls, k: int, s) -> "EdgeMeasure":
        """Law of the largest of k i.i.d. uniforms on [s, s+1]."""
        s = _q(s)
        # density k (x - s)^(k-1)
        poly = [Fraction(1)]
        for _ in range(k - 1):
            poly = _pmul(poly, [-s, Fraction(1)])
        return cls([], [(s, s + 1, _pscale(poly, k))])

    def mixed(self, other: "EdgeMeasure", w) -> "EdgeMeasure":
        w = _q(w)
        return EdgeMeasure(
            [(x, m * (1 - w)) for x, m in self.atoms] + [(x, m * w) for x, m in other.atoms],
            [(a, b, _pscale(c, 1 - w)) for a, b, c in self.pieces]
            + [(a, b, _pscale(c, w)) for a, b, c in other.pieces],
        )

    def total_mass(self) -> Fraction:
        total = sum((m for _, m in self.atoms), Fraction(0))
        for a, b, c in self.pieces:
            anti = _pint(c)
            total += _peval(anti, b) - _peval(anti, a)
        return total

    def breakpoints(self) -> set:
        pts = {x for x, _ in self.atoms}
        for a, b, _ in self.pieces:
            pts.update((a, b))
        return pts

    def is_uniform_mixture(self) -> bool:
        return all(len(c) == 1 for _, _, c in self.pieces)

    def to_json(self) -> dict:
        def r(x):
            return f"{x.numerator}/{x.denominator}"
        out = {"atoms": [[r(x), r(m)] for x, m in self.atoms], "uniform": []}
        for a, b, c in self.pieces:
            if len(c) != 1:
                raise ValueError("only uniform pieces serialize")
            out["uniform"].append([r(a), r(b), r(c[0] * (b - a))])
        return out

    @classmethod
    def from_json(cls, data) -> "EdgeMeasure":
        atoms = [(_q(x), _q(m)) for x, m in data.get("atoms", [])]
        pieces = []
        for a, b, mass in data.get("uniform", []):
            a, b, mass = _q(a), _q(b), _q(mass)
            if not a < b:
                raise ValueError("uniform piece needs a < b")
            pieces.append((a, b, [mass / (b - a)]))
        return cls(atoms, pieces)


def validate_measures(measures: Sequence[EdgeMeasure]) -> None:
    seen = {}
    for i, mu in enumerate(measures):
        if mu.total_mass() != 1:
            raise ValueError(f"edge {i}: masses sum to {mu.total_mass()}, not 1")
        if any(m < 0 for _, m in mu.atoms):
            raise ValueError(f"edge {i}: negative atom mass")
        for x, m in mu.atoms:
            if m == 0:
                continue
            if x in seen and seen[x] != i:
                raise CollisionError(f"collision: edges {seen[x]} and {i} share an atom at {x}")
            seen[x] = i


def shift_measures(shifts: Iterable) -> list:
    return [EdgeMeasure.shifted(s) for s in shifts]


def iid_uniform(m: int) -> list:
    return [EdgeMeasure.uniform(0, 1) for _ in range(m)]


# ---- piecewise engine --------------------------------------------------

class _Grid:
    """Common breakpoints B_0 < ... < B_{L-1}; cell 0 is (-inf, B_0),
    cell c+1 is [B_c, B_{c+1}), the last cell is [B_{L-1}, inf)."""

    def __init__(self, measures):
        pts = set()
        for mu in measures:
            pts |= mu.breakpoints()
        self.b = sorted(pts)
        self.L = len(self.b)
        self.atoms = []
        self.density = []
        for mu in measures:
            at = {}
            for x, m in mu.atoms:
                at[self.b.index(x)] = at.get(self.b.index(x), 0) + m
            self.atoms.append(at)
            dens = [[] for _ in range(self.L + 1)]
            for a, bb, c in mu.pieces:
                lo, hi = self.b.index(a), self.b.index(bb)
                for cell in range(lo + 1, hi + 1):
                    dens[cell] = _padd(dens[cell], c)
            self.density.append(dens)

    def one(self):
        return [[Fraction(1)] for _ in range(self.L + 1)]

    def step(self, g_old, k):
        """x -> P(chain so far, previous variable < X_k <= x)."""
        new = [[] for _ in range(self.L + 1)]
        acc = Fraction(0)
        atoms, dens = self.atoms[k], self.density[k]
        for c in range(self.L):
            bc = self.b[c]
            if c in atoms:
                acc += atoms[c] * _peval(g_old[c], bc)
            d = dens[c + 1]
            if d:
                anti = _pint(_pmul(d, g_old[c + 1]))
                poly = _padd([acc], _pscale(anti, 1))
                poly[0] -= _peval(anti, bc)
                new[c + 1] = poly
                if c + 1 < self.L:
                    acc = _peval(poly, self.b[c + 1])
            else:
                new[c + 1] = [acc]
        return new

    def final(self, g):
        return _peval(g[self.L], Fraction(0)) if g[self.L] else Fraction(0)

    def survival(self, k):
        """x -> P(X_k > x)."""
        cdf = self.step(self.one(), k)
        return [_padd([Fraction(1)], _pscale(p, -1)) for p in cdf]

    def integrate_against(self, g, q):
        """Integral of q(x) dG(x) with q right-continuous."""
        total = Fraction(0)
        for c in range(self.L):
            bc = self.b[c]
            jump = _peval(g[c + 1], bc) - _peval(g[c], bc)
            if jump:
                total += jump * _peval(q[c + 1], bc)
            if c + 1 < self.L:
                dg = _pder(g[c + 1])
                if dg:
                    anti = _pint(_pmul(dg, q[c + 1]))
                    total += _peval(anti, self.b[c + 1]) - _peval(anti, bc)
        return total


def perm_prob_exact(measures: Sequence[EdgeMeasure], sigma: Sequence[int]) -> Fraction:
    """P(X_sigma(0) < X_sigma(1) < ...), exactly."""
    validate_measures(measures)
    if sorted(sigma) != list(range(len(measures))):
        raise ValueError("sigma must order every variable")
    grid = _Grid(measures)
    g = grid.one()
    for k in sigma:
        g = grid.step(g, k)
    return grid.final(g)


def perm_distribution_exact(measures: Sequence[EdgeMeasure]) -> dict:
    """All m! order probabilities, sharing work across common prefixes."""
    validate_measures(measures)
    m = len(measures)
    if m > EXACT_EDGE_CAP:
        raise ResourceCapError(f"m={m} exceeds exact cap {EXACT_EDGE_CAP}")
    grid = _Grid(measures)
    out = {}

    def rec(prefix, g, remaining):
        if not remaining:
            out[tuple(prefix)] = grid.final(g)
            return
        for k in remaining:
            rec(prefix + [k], grid.step(g, k), [x for x in remaining if x != k])

    rec([], grid.one(), list(range(m)))
    return out


def tree_distribution_exact(g: Graph, measures: Sequence[EdgeMeasure],
                            max_edges: int = EXACT_EDGE_CAP) -> dict:
    """Exact MST law when edge i has weight law measures[i].

    Orders are explored as a prefix tree; once the Kruskal forest spans,
    the rest of the order is irrelevant and the branch is closed with a
    single integral against the joint survival of the unused edges.
    """
    if len(measures) != g.m:
        raise ValueError("need one measure per edge")
    if g.m > max_edges:
        raise ResourceCapError(f"m={g.m} exceeds exact cap {max_edges}")
    if not g.is_connected():
        raise GraphError("graph not connected")
    validate_measures(measures)
    grid = _Grid(measures)
    surv = [grid.survival(k) for k in range(g.m)]
    dist = {t: Fraction(0) for t in enumerate_spanning_trees(g)}

    def rec(gfun, parent, chosen, remaining):
        if len(chosen) == g.n - 1:
            q = [[Fraction(1)] for _ in range(grid.L + 1)]
            for k in remaining:
                q = [_pmul(a, b) for a, b in zip(q, surv[k])]
            dist[canonical(chosen)] += grid.integrate_against(gfun, q)
            return
        for k in remaining:
            g2 = grid.step(gfun, k)
            if all(not any(p) for p in g2):
                continue
            u, v = g.edges[k]
            uf = UnionFind(g.n)
            uf.parent = list(parent)
            rest = [x for x in remaining if x != k]
            if uf.union(u, v):
                rec(g2, uf.parent, chosen + [k], rest)
            else:
                rec(g2, uf.parent, chosen, rest)

    rec(grid.one(), list(range(g.n)), [], list(range(g.m)))
    return dist


def total_variation(p: dict, q: dict) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(p.get(k, 0) - q.get(k, 0)) for k in keys), Fraction(0)) / 2


# ---- shift geometry ----------------------------------------------------

def closing_gaps(s: Sequence) -> list:
    """Same order law, no gap wider than 1 after sorting, sum C(m,2)."""
    s = [_q(x) for x in s]
    m = len(s)
    order = sorted(range(m), key=lambda i: s[i])
    r = [s[i] for i in order]
    for i in range(m - 1):
        if r[i + 1] >= r[i] + 1:
            t = r[i] + 1 - r[i + 1]
            for j in range(i + 1, m):
                r[j] += t
    shift = (Fraction(math.comb(m, 2)) - sum(r)) / m if m else Fraction(0)
    out = [Fraction(0)] * m
    for pos, i in enumerate(order):
        out[i] = r[pos] + shift
    return out


def shiftahedron_contains(s: Sequence, total=None) -> bool:
    """Sorted gaps in [0, 1] and coordinate sum ``total`` (default C(m,2))."""
    r = sorted(_q(x) for x in s)
    if total is None:
        total = math.comb(len(r), 2)
    if sum(r) != _q(total):
        return False
    return all(r[i] <= r[i + 1] <= r[i] + 1 for i in range(len(r) - 1))


# ---- theta graphs ------------------------------------------------------

def theta_tree_type(r: int, s: int, t: int, tree) -> str:
    """Which arm a spanning tree of theta_graph(r, s, t) keeps whole."""
    arms = {"R": range(0, r), "S": range(r, r + s), "T": range(r + s, r + s + t)}
    tree = set(tree)
    whole = [name for name, idx in arms.items() if set(idx) <= tree]
    if len(whole) != 1:
        raise ValueError("not a spanning tree of this theta graph")
    return whole[0]


def theta_type_probs_shifted(r: int, s: int, t: int, shifts=(0, 0, 0)) -> dict:
    """Type probabilities when each arm uses one common shift.

    A tree keeps arm X whole exactly when the largest weight on X is the
    smallest of the three arm maxima, so only three variables are needed.
    """
    a, b, c = (_q(x) for x in shifts)
    maxima = [EdgeMeasure.max_of_uniforms(r, a), EdgeMeasure.max_of_uniforms(s, b),
              EdgeMeasure.max_of_uniforms(t, c)]
    out = {}
    for k, name in enumerate("RST"):
        others = [j for j in range(3) if j != k]
        out[name] = (perm_prob_exact(maxima, [k, others[0], others[1]])
                     + perm_prob_exact(maxima, [k, others[1], others[0]]))
    return out


def theta_report(r: int, s: int, t: int, shifts=None) -> dict:
    if min(r, s, t) < 1:
        raise ValueError("arm lengths must be positive")
    m = r + s + t
    count = r * s + r * t + s * t
    arms = {"R": (r, s, t), "S": (s, r, t), "T": (t, r, s)}
    # external formula: a tree keeping arm X whole misses one edge on each
    # other arm; their broken cycles have lengths x+y and x+z, and the union
    # of both is the whole graph
    per_tree = {k: (Fraction(1, x + y) + Fraction(1, x + z)) / m for k, (x, y, z) in arms.items()}
    per_type = {k: per_tree[k] * y * z for k, (x, y, z) in arms.items()}
    ust_type = {k: Fraction(y * z, count) for k, (x, y, z) in arms.items()}
    # the displayed closed form is stated for r >= s >= t
    a, b, c = sorted((r, s, t), reverse=True)
    displayed = Fraction(a * b * c * (a * a - b * c), (a + b) * (a + c) * (a * b + a * c + b * c))
    big = "RST"[[r, s, t].index(a)]
    report = {
        "r": r, "s": s, "t": t,
        "tree_count": count,
        "mst0_per_tree": per_tree,
        "mst0_per_type": per_type,
        "ust_per_tree": Fraction(1, count),
        "ust_per_type": ust_type,
        "longest_arm": big,
        "gap_per_type": ust_type[big] - per_type[big],
        "gap_per_tree": Fraction(1, count) - per_tree[big],
        "gap_mixed_reading": ust_type[big] - per_tree[big],
        "gap_displayed_formula": displayed,
        "mst0_equals_ust": all(per_tree[k] == Fraction(1, count) for k in "RST"),
    }
    if shifts is not None:
        fast = theta_type_probs_shifted(r, s, t, shifts)
        report["shifts"] = [_q(x) for x in shifts]
        report["shifted_per_type"] = fast
        if m <= EXACT_EDGE_CAP:
            g = theta_graph(r, s, t)
            per_edge = [shifts[0]] * r + [shifts[1]] * s + [shifts[2]] * t
            dist = tree_distribution_exact(g, shift_measures(per_edge))
            exact = {"R": Fraction(0), "S": Fraction(0), "T": Fraction(0)}
            for tree, p in dist.items():
                exact[theta_tree_type(r, s, t, tree)] += p
            report["shifted_per_type_full"] = exact
    return report


def _theta_tv_to_ust(r, s, t, shifts) -> Fraction:
    probs = theta_type_probs_shifted(r, s, t, shifts)
    count = r * s + r * t + s * t
    sizes = {"R": s * t, "S": r * t, "T": r * s}
    # TV over individual trees; trees of one type share a probability
    return sum((abs(probs[k] - Fraction(sizes[k], count)) for k in "RST"), Fraction(0)) / 2


@dataclass
class ThetaShiftSolution:
    shifts: tuple            # (alpha, beta, gamma), normalized into Sh(3)
    relative: tuple          # (0, beta - alpha, gamma - alpha) before normalizing
    tv: Fraction
    iterations: int


def solve_theta_ust_shift(r: int, s: int, t: int, iters: int = 60,
                          tol: float = 1e-9) -> ThetaShiftSolution:
    """Per-arm shifts making shifted-interval MST uniform on theta(r, s, t).

    The R shift is pinned at 0.  For a trial T shift the S shift is found by
    bisection so that the S-type probability hits its uniform target; the
    T shift is then bisected on the T-type residual.  Every evaluation is an
    exact rational computation at a dyadic trial point.
    """
    if r + s + t > EXACT_EDGE_CAP:
        raise ResourceCapError("r+s+t must be at most 8")
    count = r * s + r * t + s * t
    target = {"S": Fraction(r * t, count), "T": Fraction(r * s, count)}
    zero = (Fraction(0),) * 3
    if _theta_tv_to_ust(r, s, t, zero) == 0:
        return ThetaShiftSolution(tuple(closing_gaps(zero)), zero, Fraction(0), 0)

    def solve_beta(gamma):
        lo, hi = Fraction(-1), Fraction(1)
        # P_S decreases as the S arm is pushed up
        for _ in range(iters):
            mid = (lo + hi) / 2
            ps = theta_type_probs_shifted(r, s, t, (0, mid, gamma))["S"]
            if ps > target["S"]:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    lo, hi = Fraction(-1), Fraction(1)
    count_iter = 0
    for _ in range(iters):
        count_iter += 1
        mid = (lo + hi) / 2
        beta = solve_beta(mid)
        pt = theta_type_probs_shifted(r, s, t, (0, beta, mid))["T"]
        if pt > target["T"]:
            lo = mid
        else:
            hi = mid
    gamma = (lo + hi) / 2
    beta = solve_beta(gamma)
    rel = (Fraction(0), beta, gamma)
    tv = _theta_tv_to_ust(r, s, t, rel)
    if tv >= tol:
        raise ArithmeticError(f"no convergence: best TV {float(tv):.3e} at {rel}")
    return ThetaShiftSolution(tuple(closing_gaps(rel)), rel, tv, count_iter)


def quintic(x) -> Fraction:
    x = _q(x)
    return 6 * x ** 5 - 20 * x ** 3 + 30 * x - 1


# ---- snowman-free predicate -------------------------------------------

def find_snowman(g: Graph, max_vertices: int = 12) -> Optional[tuple]:
    """Three internally disjoint paths between two vertices, not all of one length.

    Returns (u, v, lengths) or None.  It suffices to find two internally
    disjoint u-v paths of different lengths plus any third path avoiding
    both, so the search runs over pairs of simple paths per vertex pair.
    """
    if g.n > max_vertices:
        raise ResourceCapError(f"n={g.n} exceeds snowman search cap {max_vertices}")
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    for u, v in itertools.combinations(range(g.n), 2):
        paths = list(nx.all_simple_paths(h, u, v))
        for p1, p2 in itertools.combinations(paths, 2):
            if len(p1) == len(p2):
                continue
            inner1, inner2 = set(p1[1:-1]), set(p2[1:-1])
            if inner1 & inner2:
                continue
            if len(p1) == 2 and len(p2) == 2:
                continue
            rest = h.copy()
            rest.remove_nodes_from(inner1 | inner2)
            if len(p1) == 2 or len(p2) == 2:
                if rest.has_edge(u, v):
                    rest.remove_edge(u, v)
            if nx.has_path(rest, u, v):
                p3 = nx.shortest_path(rest, u, v)
                return u, v, (len(p1) - 1, len(p2) - 1, len(p3) - 1)
    return None


def is_snowman_free(g: Graph, max_vertices: int = 12) -> bool:
    return find_snowman(g, max_vertices) is None
