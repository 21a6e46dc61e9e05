"""Exact spanning-tree probabilities under i.i.d. continuous edge weights.

Every value here is a ``Fraction``.  Several independent routes to the same
number are provided so they can check one another: forest induction along
Kruskal runs, subgraph induction along reverse-delete runs, the two global
sums over orders (internal and external), and brute force over all edge
orders.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from .graph_core import (
    Graph,
    GraphError,
    ResourceCapError,
    UnionFind,
    _require_tree,
    broken_cycle,
    canonical,
    enumerate_spanning_trees,
    is_forest,
    kruskal_select,
    spanning_tree_count,
)

INTERNAL_TERM_CAP = math.factorial(10)
EXTERNAL_TERM_CAP = math.factorial(10)
TREE_CAP = 20_000
BRUTE_EDGE_CAP = 10


def _components(g: Graph, edge_set) -> list:
    uf = UnionFind(g.n)
    for i in edge_set:
        u, v = g.edges[i]
        uf.union(u, v)
    return [uf.find(v) for v in range(g.n)]


def boundary_size(g: Graph, edge_set) -> int:
    """Number of edges of g joining two different components of edge_set."""
    comp = _components(g, edge_set)
    return sum(1 for u, v in g.edges if comp[u] != comp[v])


def non_separating(g: Graph, edge_set) -> list:
    """Edges of the subgraph whose removal keeps it connected (non-bridges)."""
    edge_set = list(edge_set)
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    for i in edge_set:
        h.add_edge(*g.edges[i], key=i)
    bridges = {frozenset(b) for b in nx.bridges(nx.Graph(h))}
    return [i for i in edge_set if frozenset(g.edges[i]) not in bridges]


# ---- inductions --------------------------------------------------------

def kruskal_forest_prob(g: Graph, f) -> Fraction:
    """Probability that a Kruskal run passes through the forest f."""
    f = canonical(f)
    if not is_forest(g, f):
        raise GraphError("edge set contains a cycle")
    if not g.is_connected():
        raise GraphError("graph not connected")

    @lru_cache(maxsize=None)
    def prob(sub: frozenset) -> Fraction:
        if not sub:
            return Fraction(1)
        total = Fraction(0)
        for e in sub:
            rest = sub - {e}
            total += prob(rest) / boundary_size(g, rest)
        return total

    return prob(frozenset(f))


def reverse_delete_prob(g: Graph, h) -> Fraction:
    """Probability that a reverse-delete run passes through the subgraph h."""
    h = canonical(h)
    if not g.is_connected(h):
        raise GraphError("subgraph is not connected and spanning")
    full = frozenset(range(g.m))

    @lru_cache(maxsize=None)
    def prob(sub: frozenset) -> Fraction:
        if sub == full:
            return Fraction(1)
        total = Fraction(0)
        for e in full - sub:
            bigger = sub | {e}
            total += prob(bigger) / len(non_separating(g, bigger))
        return total

    return prob(frozenset(h))


def biconnected_rd_prob(g: Graph, h) -> Fraction:
    """Closed form 1/C(m, j) for a biconnected spanning subgraph with j extra edges."""
    h = canonical(h)
    j = len(h) - (g.n - 1)
    return Fraction(1, math.comb(g.m, j))


# ---- global formulas ---------------------------------------------------

def mst_prob_internal(g: Graph, t, cap: int = INTERNAL_TERM_CAP) -> Fraction:
    """Sum over orders of the tree edges of prod 1/|boundary(F_j)|.

    Orders sharing a prefix share the partial product, so the sum is folded
    over sets of already-placed edges; the value is the full order sum.
    """
    t = _require_tree(g, t)
    if math.factorial(len(t)) > cap:
        raise ResourceCapError(f"{len(t)}! internal orders exceed cap {cap}")

    @lru_cache(maxsize=None)
    def rest(placed: frozenset) -> Fraction:
        if len(placed) == len(t):
            return Fraction(1)
        weight = Fraction(1, boundary_size(g, placed))
        return weight * sum((rest(placed | {e}) for e in t if e not in placed), Fraction(0))

    return rest(frozenset())


def mst_prob_external(g: Graph, t, cap: int = EXTERNAL_TERM_CAP) -> Fraction:
    """Sum over orders of the non-tree edges of prod 1/|D_j|, D_j the union of broken cycles."""
    t = _require_tree(g, t)
    outside = [e for e in range(g.m) if e not in t]
    if math.factorial(len(outside)) > cap:
        raise ResourceCapError(
            f"too many non-edges: {len(outside)}! orders exceed cap {cap}")
    cycles = {e: frozenset(broken_cycle(g, t, e)) | {e} for e in outside}

    @lru_cache(maxsize=None)
    def rest(placed: frozenset, covered: frozenset) -> Fraction:
        if len(placed) == len(outside):
            return Fraction(1)
        total = Fraction(0)
        for e in outside:
            if e in placed:
                continue
            d = covered | cycles[e]
            total += rest(placed | {e}, d) / len(d)
        return total

    return rest(frozenset(), frozenset())


def brute_force_mst_distribution(g: Graph, max_edges: int = BRUTE_EDGE_CAP) -> dict:
    """Tally kruskal_select over every edge order; exact but m! work."""
    if g.m > max_edges:
        raise ResourceCapError(f"m={g.m} exceeds brute-force cap {max_edges}")
    counts = {}
    for order in itertools.permutations(range(g.m)):
        t = kruskal_select(g, order)
        counts[t] = counts.get(t, 0) + 1
    total = math.factorial(g.m)
    return {t: Fraction(c, total) for t, c in sorted(counts.items())}


def brute_force_mst_prob(g: Graph, t, max_edges: int = BRUTE_EDGE_CAP) -> Fraction:
    t = _require_tree(g, t)
    return brute_force_mst_distribution(g, max_edges).get(t, Fraction(0))


METHODS = {
    "internal": mst_prob_internal,
    "external": mst_prob_external,
    "kruskal": kruskal_forest_prob,
    "rd": reverse_delete_prob,
    "brute": brute_force_mst_prob,
}


def mst_prob(g: Graph, t, method: str = "internal") -> Fraction:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    t = _require_tree(g, t)
    return METHODS[method](g, t)


def mst_distribution(g: Graph, method: str = "internal", tree_cap: int = TREE_CAP) -> dict:
    count = spanning_tree_count(g)
    if count == 0:
        raise GraphError("graph not connected")
    if count > tree_cap:
        raise ResourceCapError(f"{count} spanning trees exceed cap {tree_cap}")
    if method == "brute":
        dist = brute_force_mst_distribution(g)
        return {t: dist.get(t, Fraction(0)) for t in enumerate_spanning_trees(g)}
    return {t: mst_prob(g, t, method) for t in enumerate_spanning_trees(g)}


def uniform_distribution(g: Graph, tree_cap: int = TREE_CAP) -> dict:
    count = spanning_tree_count(g)
    if count > tree_cap:
        raise ResourceCapError(f"{count} spanning trees exceed cap {tree_cap}")
    return {t: Fraction(1, count) for t in enumerate_spanning_trees(g)}


def star_prob_closed_form(n: int) -> Fraction:
    if n < 2:
        raise ValueError("n must be at least 2")
    return Fraction(1, math.prod(range(1, 2 * n - 2, 2)))


# ---- unlabeled forests in K_n -----------------------------------------

def _rooted_code(adj: dict, root, parent=None) -> str:
    kids = sorted(_rooted_code(adj, c, root) for c in adj[root] if c != parent)
    return "(" + "".join(kids) + ")"


def _tree_code(adj: dict, nodes: list) -> str:
    # canonical code of a free tree: root at its center(s), take the smaller
    if len(nodes) == 1:
        return "()"
    degree = {v: len(adj[v]) for v in nodes}
    leaves = [v for v in nodes if degree[v] <= 1]
    remaining = len(nodes)
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for w in adj[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
            degree[leaf] = 0
        leaves = nxt
    return min(_rooted_code(adj, c) for c in leaves)


def forest_class_key(n: int, edges) -> tuple:
    """Isomorphism-invariant key of a forest on n vertices given by vertex pairs."""
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = set()
    codes = []
    for v in range(n):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        codes.append(_tree_code(adj, comp))
    return tuple(sorted(codes, key=lambda c: (-len(c), c)))


def _key_to_edges(key: tuple) -> list:
    edges = []
    nxt = 0

    def build(code: str, pos: int) -> tuple:
        nonlocal nxt
        me = nxt
        nxt += 1
        pos += 1  # '('
        while code[pos] == "(":
            child = nxt
            pos = build(code, pos)[1]
            edges.append((me, child))
        return me, pos + 1

    for code in key:
        build(code, 0)
    return edges


def _e2(sizes) -> int:
    total = sum(sizes)
    return (total * total - sum(s * s for s in sizes)) // 2


def _component_sizes(key: tuple) -> list:
    return [c.count("(") for c in key]


def forest_class_probs_kn(n: int) -> dict:
    """Kruskal probabilities of every unlabeled forest shape in K_n.

    Returns {key: (P, P_tilde, labeled_copies)} where P is the probability
    for one labeled representative and P_tilde = P / #boundary, with
    #boundary the number of K_n edges between components.
    """
    if not 2 <= n <= 8:
        raise ValueError("n must be between 2 and 8")
    empty = tuple(["()"] * n)
    table = {empty: Fraction(1)}
    level = [empty]
    for _ in range(n - 1):
        nxt = {}
        for key in level:
            edges = _key_to_edges(key)
            comp = _components(Graph(n, edges), range(len(edges)))
            for u in range(n):
                for v in range(u + 1, n):
                    if comp[u] != comp[v]:
                        nxt.setdefault(forest_class_key(n, edges + [(u, v)]), None)
        for key in nxt:
            edges = _key_to_edges(key)
            total = Fraction(0)
            for i in range(len(edges)):
                sub = forest_class_key(n, edges[:i] + edges[i + 1:])
                total += table[sub] / _e2(_component_sizes(sub))
            table[key] = total
        level = list(nxt)
    out = {}
    for key, p in table.items():
        edges = _key_to_edges(key)
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        autos = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(g, g).isomorphisms_iter())
        boundary = _e2(_component_sizes(key))
        p_tilde = p / boundary if boundary else None
        out[key] = (p, p_tilde, math.factorial(n) // autos)
    return out
