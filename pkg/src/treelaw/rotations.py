"""Rotation moves between spanning trees and the inequalities they imply.

Three tools live here:

* cycle-expanding bijections (check a given one, or search for one by
  matching non-edges once the tree part is fixed);
* triangle-edge rotation sites, including the random-graph witness;
* the folded-permutation path rotation algorithm on complete graphs, which
  returns both tree probabilities as exact fractions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from .graph_core import (
    Graph,
    GraphError,
    ResourceCapError,
    _require_tree,
    broken_cycle,
    canonical,
    complete_graph,
    cycle_relation,
    enumerate_spanning_trees,
    tree_path,
)
from .mst_exact import mst_prob_internal


class Expansion(str, Enum):
    NOT_EXPANDING = "NotExpanding"
    WEAK = "Weak"
    STRICT = "Strict"


# ---- cycle-expanding bijections ---------------------------------------

def cycle_expanding_check(g: Graph, t1, t2, beta: Sequence[int]) -> Expansion:
    t1, t2 = _require_tree(g, t1), _require_tree(g, t2)
    beta = list(beta)
    if sorted(beta) != list(range(g.m)):
        raise GraphError("beta is not a bijection on edge indices")
    if canonical(beta[e] for e in t1) != t2:
        raise GraphError("beta does not map t1 onto t2")
    image = {(beta[a], beta[b]) for a, b in cycle_relation(g, t1)}
    r2 = cycle_relation(g, t2)
    if not image <= r2:
        return Expansion.NOT_EXPANDING
    return Expansion.STRICT if image != r2 else Expansion.WEAK


def broken_cycle_lengths(g: Graph, t) -> list:
    """Sorted lengths of the cycles closed by each non-edge (non-edge included)."""
    t = _require_tree(g, t)
    return sorted(len(broken_cycle(g, t, e)) + 1 for e in range(g.m) if e not in t)


def find_cycle_expanding_bijection(g: Graph, t1, t2) -> Optional[list]:
    """Search for beta with beta(t1)=t2 and beta(R1) within R2.

    For each bijection of tree edges, the remaining freedom is a bijection
    of non-edges subject to path containment, which is a bipartite perfect
    matching problem.  So the search is exhaustive over (n-1)! tree maps
    only.  A strict bijection is returned when one exists.
    """
    t1, t2 = _require_tree(g, t1), _require_tree(g, t2)
    out1 = [e for e in range(g.m) if e not in t1]
    out2 = [e for e in range(g.m) if e not in t2]
    p1 = {e: broken_cycle(g, t1, e) for e in out1}
    p2 = {e: set(broken_cycle(g, t2, e)) for e in out2}
    weak = None
    for perm in itertools.permutations(t2):
        tmap = dict(zip(t1, perm))
        b = nx.Graph()
        b.add_nodes_from(("a", e) for e in out1)
        b.add_nodes_from(("b", f) for f in out2)
        for e in out1:
            image = {tmap[x] for x in p1[e]}
            for f in out2:
                if image <= p2[f]:
                    b.add_edge(("a", e), ("b", f))
        match = nx.bipartite.maximum_matching(b, top_nodes=[("a", e) for e in out1])
        if sum(1 for k in match if k[0] == "a") < len(out1):
            continue
        beta = [0] * g.m
        for e, f in tmap.items():
            beta[e] = f
        for e in out1:
            beta[e] = match[("a", e)][1]
        if cycle_expanding_check(g, t1, t2, beta) is Expansion.STRICT:
            return beta
        weak = weak or beta
    return weak


def degree_product(g: Graph, t) -> int:
    deg = [0] * g.n
    for i in t:
        u, v = g.edges[i]
        deg[u] += 1
        deg[v] += 1
    return math.prod(d for d in deg if d > 0)


# ---- triangle-edge rotation -------------------------------------------

@dataclass
class RotationSite:
    triangle: tuple          # (v1, v2, v3); rotation is based at v1
    groups: tuple            # vertex sets of T1, T2, T3
    s: tuple                 # tree containing e12 and e23
    s_prime: tuple           # tree containing e13 and e23
    beta: list               # swaps e12 and e13

    def to_json(self) -> dict:
        return {
            "triangle": list(self.triangle),
            "groups": [sorted(x) for x in self.groups],
            "S": list(self.s),
            "S_prime": list(self.s_prime),
        }


def _triangles(g: Graph) -> list:
    adj = {v: set() for v in range(g.n)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for a in range(g.n):
        for b in adj[a]:
            if b <= a:
                continue
            for c in adj[a] & adj[b]:
                if c > b:
                    out.append((a, b, c))
    return out


def _spanning_tree_of(g: Graph, vertices: set) -> Optional[list]:
    """Edge indices of a BFS spanning tree of the induced subgraph, or None."""
    vertices = set(vertices)
    if len(vertices) == 1:
        return []
    start = min(vertices)
    seen = {start}
    queue = [start]
    tree = []
    while queue:
        x = queue.pop(0)
        for i, (u, v) in enumerate(g.edges):
            if x in (u, v):
                y = v if u == x else u
                if y in vertices and y not in seen:
                    seen.add(y)
                    tree.append(i)
                    queue.append(y)
    return tree if seen == vertices else None


def _edges_between(g: Graph, a: set, b: set) -> list:
    return [i for i, (u, v) in enumerate(g.edges)
            if (u in a and v in b) or (u in b and v in a)]


def _site_from_groups(g: Graph, tri, groups) -> Optional[RotationSite]:
    v1, v2, v3 = tri
    g1, g2, g3 = groups
    trees = [_spanning_tree_of(g, grp) for grp in groups]
    if any(tr is None for tr in trees):
        return None
    e12, e23, e13 = g.edge_index(v1, v2), g.edge_index(v2, v3), g.edge_index(v1, v3)
    if len(_edges_between(g, g1, g2)) < 2:
        return None
    if _edges_between(g, g1, g3) != [e13]:
        return None
    base = [e for tr in trees for e in tr]
    s = canonical(base + [e12, e23])
    s_prime = canonical(base + [e13, e23])
    beta = list(range(g.m))
    beta[e12], beta[e13] = e13, e12
    return RotationSite(tri, (frozenset(g1), frozenset(g2), frozenset(g3)), s, s_prime, beta)


def triangle_rotation_sites(g: Graph, max_vertices: int = 10, per_triangle: int = 1) -> list:
    """Witness pairs (S, S') meeting every hypothesis of the triangle rotation lemma.

    The remaining vertices are assigned to the three groups exhaustively
    (3^(n-3) assignments), so this is meant for small graphs.
    """
    if g.n > max_vertices:
        raise ResourceCapError(f"n={g.n} exceeds site search cap {max_vertices}")
    sites = []
    for tri in _triangles(g):
        for v1, v2, v3 in itertools.permutations(tri):
            found = 0
            rest = [v for v in range(g.n) if v not in tri]
            for assign in itertools.product(range(3), repeat=len(rest)):
                groups = [{v1}, {v2}, {v3}]
                for v, k in zip(rest, assign):
                    groups[k].add(v)
                site = _site_from_groups(g, (v1, v2, v3), groups)
                if site is not None:
                    sites.append(site)
                    found += 1
                    if found >= per_triangle:
                        break
    return sites


def house_graph() -> Graph:
    # square 0-1-2-3 with a roof vertex 4 over the side (2,3)
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)])


def gnp_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < p
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


@dataclass
class Witness:
    graph: Graph
    triangle: tuple
    s: tuple
    s_prime: tuple
    p_s: Fraction
    p_s_prime: Fraction
    lemma_hypotheses: bool
    expansion: Expansion = field(default=Expansion.NOT_EXPANDING)

    def to_json(self) -> dict:
        from .graph_core import format_rational
        return {
            "graph": self.graph.to_json(),
            "triangle": list(self.triangle),
            "S": list(self.s),
            "S_prime": list(self.s_prime),
            "p_S": format_rational(self.p_s),
            "p_S_prime": format_rational(self.p_s_prime),
            "lemma_hypotheses": self.lemma_hypotheses,
            "expansion": self.expansion.value,
        }


def witness_in_graph(g: Graph) -> Optional[Witness]:
    """Triangle construction from the random-graph argument, verified exactly.

    For a triangle C whose complement is connected, T1 is a spanning tree of
    G minus C plus one edge to v1, and T2, T3 are the single vertices v2, v3.
    Candidates where the full lemma hypotheses hold are tried first; every
    returned witness has P(S) > P(S') checked with exact fractions.
    """
    if g.m < g.n or not g.is_connected():
        return None
    adj = {v: set() for v in range(g.n)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    candidates = []
    for tri in _triangles(g):
        rest = set(range(g.n)) - set(tri)
        if not rest:
            continue
        base = _spanning_tree_of(g, rest)
        if base is None:
            continue
        outward = [v for v in tri if adj[v] & rest]
        if len(outward) < 2:
            continue
        for v1, v2, v3 in itertools.permutations(tri):
            if not (adj[v1] & rest and adj[v2] & rest):
                continue
            for x in sorted(adj[v1] & rest):
                e12, e23, e13 = g.edge_index(v1, v2), g.edge_index(v2, v3), g.edge_index(v1, v3)
                hook = g.edge_index(x, v1)
                s = canonical(base + [hook, e12, e23])
                s_prime = canonical(base + [hook, e13, e23])
                clean = not (adj[v3] & rest)
                candidates.append((not clean, (v1, v2, v3), s, s_prime, e12, e13))
    candidates.sort(key=lambda c: c[0])
    for dirty, tri, s, s_prime, e12, e13 in candidates:
        ps, psp = mst_prob_internal(g, s), mst_prob_internal(g, s_prime)
        if ps > psp:
            beta = list(range(g.m))
            beta[e12], beta[e13] = e13, e12
            exp = cycle_expanding_check(g, s, s_prime, beta)
            return Witness(g, tri, s, s_prime, ps, psp, not dirty, exp)
    return None


def _lemma_site_witness(g: Graph) -> Optional[Witness]:
    for site in triangle_rotation_sites(g):
        ps, psp = mst_prob_internal(g, site.s), mst_prob_internal(g, site.s_prime)
        if ps > psp:
            exp = cycle_expanding_check(g, site.s, site.s_prime, site.beta)
            return Witness(g, site.triangle, site.s, site.s_prime, ps, psp, True, exp)
    return None


def _distribution_witness(g: Graph) -> Optional[Witness]:
    from .mst_exact import mst_distribution
    dist = mst_distribution(g)
    hi = max(dist, key=dist.get)
    lo = min(dist, key=dist.get)
    if dist[hi] == dist[lo]:
        return None
    return Witness(g, (), hi, lo, dist[hi], dist[lo], False)


def random_graph_witness(n: int, p: float, seed, search: str = "proof") -> Optional[Witness]:
    """Sample G(n, p) and look for an exactly verified pair with P(S) > P(S').

    ``search`` widens the net: "proof" uses only the single-vertex triangle
    construction, "lemma" also tries every triangle rotation site, "exact"
    finally compares the full exact distribution.
    """
    if n > 9:
        raise ResourceCapError("exact verification supports n <= 9")
    if search not in ("proof", "lemma", "exact"):
        raise ValueError(f"unknown search mode {search!r}")
    rng = np.random.default_rng(seed)
    g = gnp_graph(n, p, rng)
    if not g.is_connected():
        return None
    w = witness_in_graph(g)
    if w is None and search in ("lemma", "exact"):
        w = _lemma_site_witness(g)
    if w is None and search == "exact":
        w = _distribution_witness(g)
    return w


# ---- path rotation via folded permutations ----------------------------

NEITHER, BOTH, LEFT, RIGHT = "Neither", "Both", "Left", "Right"
FOLDED_CAP = 2_000_000


class PathRotation:
    """A tree T = L + P + R of K_n with L and R hanging off v_1.

    T' keeps L and P and moves every attachment of R from v_1 to v_l.
    ``path`` lists v_1..v_l; ``left`` and ``right`` are vertex pairs.
    """

    def __init__(self, n: int, left, path, right, literal: bool = False):
        self.n = n
        self.literal = literal
        self.path = [int(v) for v in path]
        self.left = [tuple(e) for e in left]
        self.right = [tuple(e) for e in right]
        ell = len(self.path)
        if ell < 2:
            raise GraphError("path needs at least 2 vertices")
        if not self.left or not self.right:
            raise GraphError("L and R each need at least one edge")
        v1, vl = self.path[0], self.path[-1]
        self.vl_vertices = {x for e in self.left for x in e} - {v1}
        self.vr_vertices = {x for e in self.right for x in e} - {v1}
        vp = set(self.path)
        if (self.vl_vertices & self.vr_vertices or self.vl_vertices & vp
                or self.vr_vertices & vp or len(vp) != ell):
            raise GraphError("L, P, R must have disjoint vertex sets (sharing only v_1)")
        if len(self.vl_vertices | self.vr_vertices | vp) != n:
            raise GraphError("L, P, R must cover all vertices")
        self.g = complete_graph(n)
        g = self.g
        path_edges = [g.edge_index(a, b) for a, b in zip(self.path, self.path[1:])]
        t = canonical([g.edge_index(*e) for e in self.left + self.right] + path_edges)
        moved = [tuple(vl if x == v1 else x for x in e) for e in self.right]
        t_prime = canonical([g.edge_index(*e) for e in self.left + moved] + path_edges)
        for tree, name in ((t, "T"), (t_prime, "T'")):
            if len(tree) != n - 1 or not g.is_connected(tree):
                raise GraphError(f"{name} is not a spanning tree of K_{n}")
        self.t, self.t_prime = t, t_prime
        self.ell = ell
        self.r = ell // 2
        self.a = (math.comb(ell, 2) - self.r) // 2
        self._build_classes()

    # vertex index along the path, 1-based
    def _pos(self, v):
        return self.path.index(v) + 1

    def label(self, p: int) -> tuple:
        """Class index and side of the path edge at position p (between v_p, v_p+1)."""
        if p <= self.r:
            return p, "e"
        return self.ell - p, "bar"

    def reflect(self, v: int) -> int:
        if v in self.path:
            return self.path[self.ell - self._pos(v)]
        return v

    def _build_classes(self):
        g = self.g
        seen = set()
        self.classes = []
        for i, (u, v) in enumerate(g.edges):
            if i in seen:
                continue
            if u in self.path and v in self.path:
                j = g.edge_index(self.reflect(u), self.reflect(v))
            else:
                j = i
            members = tuple(sorted({i, j}))
            seen.update(members)
            self.classes.append(members)
        self.class_of = {e: k for k, cls in enumerate(self.classes) for e in cls}
        self.kinds = [self._describe(cls) for cls in self.classes]
        self.sizes = tuple(len(c) for c in self.classes)

    def _describe(self, cls):
        g = self.g
        u, v = g.edges[cls[0]]
        tset = set(self.t)
        pset = set(self.path)
        if u in pset and v in pset:
            i1, i2 = sorted((self._pos(u), self._pos(v)))
            if i2 == i1 + 1:
                idx, _ = self.label(i1)
                if self.ell % 2 == 0 and idx == self.r:
                    return ("middle", idx)
                return ("pair", idx)
            big1, _ = self.label(i1)
            big2, _ = self.label(i2 - 1)
            positions = range(i1, i2)
            touched = {}
            for p in positions:
                idx, side = self.label(p)
                touched.setdefault(idx, set()).add(side)
            if self.ell % 2 == 0:
                touched.get(self.r, set()).update({"e", "bar"})
            crossing = any(len(s) == 2 for s in touched.values())
            literal_crossing = 2 * i1 <= self.ell <= 2 * i2
            return ("chord", big1, big2, crossing, literal_crossing)
        if cls[0] in tset:
            return ("tree",)
        path = tree_path(g, self.t, u, v)
        path_classes = frozenset(self.class_of[e] for e in path)
        in_l = lambda x: x in self.vl_vertices
        in_r = lambda x: x in self.vr_vertices
        if (in_l(u) and in_r(v)) or (in_r(u) and in_l(v)):
            return ("uv", path_classes, "cross")
        if (in_l(u) or in_r(u)) and v in pset or (in_l(v) or in_r(v)) and u in pset:
            side_vertex, pv = (u, v) if (in_l(u) or in_r(u)) else (v, u)
            side = LEFT if in_l(side_vertex) else RIGHT
            j = self._pos(pv)
            if j == 1:
                return ("uv", path_classes, "none")
            idx, kind = self.label(j - 1)
            if self.ell % 2 == 0 and idx == self.r:
                kind = "e"
            return ("uv", path_classes, "side", side, kind, idx)
        return ("uv", path_classes, "none")

    # ---- single step of the folded Kruskal run -------------------------

    def step(self, s: tuple, counts: tuple, k: int):
        """Process class k given the state s and visit counts so far.

        Returns (factor_q, factor_q', new_s).  Factors are Fractions; a
        factor of 0 kills the corresponding tree.
        """
        kind = self.kinds[k]
        s = list(s)
        one, zero, half = Fraction(1), Fraction(0), Fraction(1, 2)
        fq, fqp = one, one
        tag = kind[0]
        if tag == "middle":
            s[kind[1] - 1] = BOTH
        elif tag == "pair":
            i = kind[1]
            if counts[k] == 0:
                s[i - 1] = frozenset({i})
            else:
                s[i - 1] = BOTH
                s = [x - {i} if isinstance(x, frozenset) else x for x in s]
        elif tag == "tree":
            pass
        elif tag == "uv":
            path_classes, sub = kind[1], kind[2]
            if any(counts[c] == 0 for c in path_classes):
                return zero, zero, tuple(s)
            if sub == "cross":
                if any(x != BOTH for x in s):
                    fqp = zero
            elif sub == "side":
                side, last, i = kind[3], kind[4], kind[5]
                if last == "bar" and any(s[j - 1] != BOTH for j in range(i, self.r + 1)):
                    return zero, zero, tuple(s)
                window = s[:i]
                big_m = {x for x in window if isinstance(x, frozenset)}
                big_n = {x for x in window if x in (LEFT, RIGHT, NEITHER)}
                f = Fraction(1, 2 ** len(big_m))
                fq, fqp = f, f
                if not big_n <= {side}:
                    fqp = zero
                for j in set().union(*big_m) if big_m else ():
                    s[j - 1] = side
        elif tag == "chord":
            i1, i2 = kind[1], kind[2]
            crossing = kind[4] if self.literal else kind[3]
            lo, hi = min(i1, i2), max(i1, i2)
            window = s[lo - 1:hi]
            big_m = {x for x in window if isinstance(x, frozenset)}
            big_n = {x for x in window if x in (LEFT, RIGHT, NEITHER)}
            if crossing and any(s[j - 1] != BOTH for j in range(hi, self.r + 1)):
                return zero, zero, tuple(s)
            f = Fraction(1, 2 ** len(big_m))
            fq, fqp = f, f
            union = set().union(*big_m) if big_m else set()
            second = counts[k] >= 1
            if big_n:
                if NEITHER in big_n or second:
                    return zero, zero, tuple(s)
                if {LEFT, RIGHT} <= big_n:
                    if self.literal:
                        return zero, zero, tuple(s)
                    # T holds e_j under both labels, so only the e-side
                    # representative can be rejected; T' needs both sides
                    fq, fqp = fq * half, zero
                    only = LEFT
                else:
                    fq, fqp = fq * half, fqp * half
                    (only,) = big_n
                for j in union:
                    s[j - 1] = only
            else:
                if second and big_m and not self.literal:
                    # the other representative needs the opposite side of
                    # every entangled pair that the first one fixed
                    return zero, zero, tuple(s)
                merged = frozenset(union)
                for j in union:
                    s[j - 1] = merged
        return fq, fqp, tuple(s)

    def initial_state(self) -> tuple:
        return tuple([NEITHER] * self.r)

    def run(self, sequence, state=None, counts=None, q=Fraction(1), qp=Fraction(1)):
        """Replay a folded permutation (list of class ids), returning the trace.

        Each trace entry is (class id, s, q, q') after that step.
        """
        s = state if state is not None else self.initial_state()
        counts = list(counts) if counts is not None else [0] * len(self.classes)
        trace = []
        for k in sequence:
            fq, fqp, s = self.step(s, tuple(counts), k)
            q, qp = q * fq, qp * fqp
            counts[k] += 1
            trace.append((k, s, q, qp))
        return trace

    def folded_count(self) -> int:
        return math.factorial(self.g.m) // 2 ** self.a

    def probabilities(self, cap: int = FOLDED_CAP) -> tuple:
        """(P_MST(T), P_MST(T')) summed over all folded permutations.

        Folded permutations sharing a prefix are summed together: the
        suffix contribution depends only on visit counts and state.
        ``cap`` bounds the number of distinct (counts, state) nodes.
        """
        sizes = self.sizes
        full = sizes
        nodes = [0]

        @lru_cache(maxsize=None)
        def total(counts: tuple, s: tuple) -> tuple:
            nodes[0] += 1
            if nodes[0] > cap:
                raise ResourceCapError(f"folded-permutation search exceeded {cap} states")
            if counts == full:
                return Fraction(1), Fraction(1)
            acc_q, acc_qp = Fraction(0), Fraction(0)
            for k, c in enumerate(counts):
                if c == sizes[k]:
                    continue
                fq, fqp, s2 = self.step(s, counts, k)
                if fq == 0 and fqp == 0:
                    continue
                nxt = counts[:k] + (c + 1,) + counts[k + 1:]
                sub_q, sub_qp = total(nxt, s2)
                acc_q += fq * sub_q
                acc_qp += fqp * sub_qp
            return acc_q, acc_qp

        sq, sqp = total(tuple([0] * len(sizes)), self.initial_state())
        scale = Fraction(2 ** self.a, math.factorial(self.g.m))
        return sq * scale, sqp * scale


def normalized_rotation(n: int, left, path, right, literal: bool = False) -> PathRotation:
    """Build an instance from L, P, R given with either attachment convention.

    R may hang off v_1 (the tree is T) or off v_l (the tree is T'); if L
    hangs off v_l instead of v_1 the path is read backwards.
    """
    path = [int(v) for v in path]
    left = [tuple(int(x) for x in e) for e in left]
    right = [tuple(int(x) for x in e) for e in right]

    def touches(edges, v):
        return any(v in e for e in edges)

    if touches(left, path[-1]) and not touches(left, path[0]):
        path = path[::-1]
    if touches(right, path[-1]) and not touches(right, path[0]):
        right = [tuple(path[0] if x == path[-1] else x for x in e) for e in right]
    return PathRotation(n, left, path, right, literal)


def enumerate_path_rotations(n: int):
    """Every path rotation instance in K_n with P = (0..l-1) (labels fixed by symmetry)."""
    for ell in range(2, n - 1):
        path = list(range(ell))
        rest = list(range(ell, n))
        v1 = 0
        for mask in range(1, 2 ** len(rest) - 1):
            vl = [x for b, x in enumerate(rest) if mask >> b & 1]
            vr = [x for b, x in enumerate(rest) if not mask >> b & 1]
            for lt in _trees_on([v1] + vl):
                for rt in _trees_on([v1] + vr):
                    yield PathRotation(n, lt, path, rt)


def _trees_on(vertices: list):
    sub = Graph(len(vertices), [(i, j) for i in range(len(vertices))
                                for j in range(i + 1, len(vertices))])
    for t in enumerate_spanning_trees(sub):
        yield [(vertices[sub.edges[e][0]], vertices[sub.edges[e][1]]) for e in t]


def path_rotation_probs(inst: PathRotation, cap: int = FOLDED_CAP) -> tuple:
    return inst.probabilities(cap)


def folded_oracle(inst: PathRotation, sequence) -> list:
    """Per-step (q, q') computed by brute force over representatives.

    After each step k, q is the fraction of representatives sigma of the
    folded prefix whose Kruskal forest still lies inside T; q' is the same
    for the image prefix in T'.  Exponential in a; for checking only.
    """
    g = inst.g
    pset = set(inst.path)

    def image_class(k):
        cls = inst.classes[k]
        if len(cls) == 1:
            u, v = g.edges[cls[0]]
            if u in inst.vr_vertices and v in pset:
                return (g.edge_index(u, inst.reflect(v)),)
            if v in inst.vr_vertices and u in pset:
                return (g.edge_index(v, inst.reflect(u)),)
        return cls

    out = []
    for tree, classes in ((inst.t, inst.classes),
                          (inst.t_prime, [image_class(k) for k in range(len(inst.classes))])):
        tset = set(tree)
        pairs = [k for k in range(len(classes)) if len(classes[k]) == 2]
        alive_by_step = [0] * len(sequence)
        for flips in itertools.product((0, 1), repeat=len(pairs)):
            flip = dict(zip(pairs, flips))
            used = {}
            from .graph_core import UnionFind
            uf = UnionFind(g.n)
            ok = True
            for step, k in enumerate(sequence):
                idx = used.get(k, 0)
                used[k] = idx + 1
                cls = classes[k]
                e = cls[(idx + flip.get(k, 0)) % len(cls)]
                u, v = g.edges[e]
                if ok and uf.union(u, v) and e not in tset:
                    ok = False
                if ok:
                    alive_by_step[step] += 1
        out.append([Fraction(c, 2 ** len(pairs)) for c in alive_by_step])
    return list(zip(out[0], out[1]))
