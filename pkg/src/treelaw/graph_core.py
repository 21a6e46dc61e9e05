"""Graphs with stable edge indices, spanning trees, broken cycles and Kruskal."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Tree = tuple  # sorted tuple of edge indices


class GraphError(ValueError):
    pass


class ResourceCapError(RuntimeError):
    """Raised when an exact computation would exceed its configured budget."""


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        es = tuple((int(u), int(v)) for u, v in edges)
        seen = set()
        for u, v in es:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", es)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self, u: int, v: int) -> int:
        for i, (a, b) in enumerate(self.edges):
            if {a, b} == {u, v}:
                return i
        raise KeyError((u, v))

    def is_connected(self, subset: Iterable[int] | None = None) -> bool:
        idx = range(self.m) if subset is None else subset
        uf = UnionFind(self.n)
        comps = self.n
        for i in idx:
            u, v = self.edges[i]
            if uf.union(u, v):
                comps -= 1
        return comps <= 1

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["n"], data["edges"])


# ---- standard families -------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def square_with_diagonal() -> Graph:
    # square 0-1-2-3-0 followed by the diagonal (0,2) at index 4
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def theta_graph(r: int, s: int, t: int) -> Graph:
    """Two poles joined by three internally disjoint paths of r, s, t edges.

    At most one arm may have length 1 (the graph is simple).  Vertex 0 and 1
    are the poles; edges are listed arm by arm, pole 0 outward.
    """
    arms = (r, s, t)
    if min(arms) < 1 or sum(1 for a in arms if a == 1) > 1:
        raise GraphError("theta arms must be >= 1 with at most one arm of length 1")
    edges = []
    nxt = 2
    for length in arms:
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph(nxt, edges)


def star_tree(g: Graph, center: int = 0) -> Tree:
    return canonical([i for i, (u, v) in enumerate(g.edges) if center in (u, v)])


def path_tree(g: Graph, vertices: Sequence[int]) -> Tree:
    return canonical([g.edge_index(a, b) for a, b in zip(vertices, vertices[1:])])


def canonical(edge_set: Iterable[int]) -> Tree:
    return tuple(sorted(set(int(e) for e in edge_set)))


# ---- trees -------------------------------------------------------------

def is_forest(g: Graph, f: Iterable[int]) -> bool:
    uf = UnionFind(g.n)
    for i in f:
        u, v = g.edges[i]
        if not uf.union(u, v):
            return False
    return True


def is_spanning_tree(g: Graph, t: Iterable[int]) -> bool:
    t = list(t)
    if len(set(t)) != len(t) or any(not 0 <= i < g.m for i in t):
        return False
    return len(t) == g.n - 1 and is_forest(g, t)


def _require_tree(g: Graph, t) -> Tree:
    t = canonical(t)
    if not is_spanning_tree(g, t):
        raise GraphError(f"{list(t)} is not a spanning tree")
    return t


def enumerate_spanning_trees(g: Graph) -> list:
    """All spanning trees in lexicographic order of their sorted edge indices.

    Branches on edges in index order (include, then exclude), so the output
    is already lexicographic.  Dead branches are cut when the included edges
    form a cycle or when the remaining edges cannot reconnect the graph.
    """
    if not g.is_connected():
        raise GraphError("graph not connected")
    out = []
    need = g.n - 1

    def rec(i: int, chosen: list, uf_parent: list):
        if len(chosen) == need:
            out.append(tuple(chosen))
            return
        if g.m - i < need - len(chosen):
            return
        # prune: chosen + remaining edges must still connect everything
        if not g.is_connected(chosen + list(range(i, g.m))):
            return
        u, v = g.edges[i]
        uf = UnionFind(g.n)
        uf.parent = list(uf_parent)
        if uf.union(u, v):
            rec(i + 1, chosen + [i], uf.parent)
        rec(i + 1, chosen, uf_parent)

    if g.n == 1:
        return [()]
    rec(0, [], list(range(g.n)))
    return out


def bareiss_det(matrix: list) -> int:
    """Fraction-free Gaussian elimination determinant of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for p in range(k - 1):
        if a[p][p] == 0:
            swap = next((r for r in range(p + 1, k) if a[r][p] != 0), None)
            if swap is None:
                return 0
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) // prev
        prev = a[p][p]
    return sign * a[k - 1][k - 1]


def laplacian(g: Graph) -> list:
    lap = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    return lap


def spanning_tree_count(g: Graph) -> int:
    """Matrix-tree count; 0 for a disconnected graph."""
    if g.n <= 1:
        return 1
    lap = laplacian(g)
    minor = [row[1:] for row in lap[1:]]
    return bareiss_det(minor)


def tree_path(g: Graph, t: Iterable[int], a: int, b: int) -> list:
    """Edge indices on the unique a-b path of tree t, ordered from a to b."""
    adj = {v: [] for v in range(g.n)}
    for i in t:
        u, v = g.edges[i]
        adj[u].append((v, i))
        adj[v].append((u, i))
    prev = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for y, i in adj[x]:
            if y not in prev:
                prev[y] = (x, i)
                stack.append(y)
    if b not in prev:
        raise GraphError(f"no path between {a} and {b}")
    path = []
    x = b
    while prev[x] is not None:
        x, i = prev[x]
        path.append(i)
    return path[::-1]


def broken_cycle(g: Graph, t, e: int) -> tuple:
    """Tree edges on the path joining the endpoints of the non-tree edge e."""
    t = _require_tree(g, t)
    if e in t:
        raise GraphError(f"edge {e} lies in the tree")
    if not 0 <= e < g.m:
        raise GraphError(f"edge {e} out of range")
    u, v = g.edges[e]
    return canonical(tree_path(g, t, u, v))


def cycle_relation(g: Graph, t) -> set:
    """Pairs (tree edge, non-tree edge) with the tree edge on the broken cycle."""
    t = _require_tree(g, t)
    rel = set()
    tset = set(t)
    for e in range(g.m):
        if e in tset:
            continue
        for f in broken_cycle(g, t, e):
            rel.add((f, e))
    return rel


def kruskal_select(g: Graph, order: Sequence[int]) -> Tree:
    """Greedy spanning tree when edges are taken in the given order."""
    if sorted(order) != list(range(g.m)):
        raise GraphError("order must be a permutation of all edge indices")
    uf = UnionFind(g.n)
    chosen = []
    for i in order:
        u, v = g.edges[i]
        if uf.union(u, v):
            chosen.append(i)
            if len(chosen) == g.n - 1:
                break
    if len(chosen) != g.n - 1:
        raise GraphError("graph not connected")
    return canonical(chosen)


def satisfies_cycle_order(g: Graph, t, order: Sequence[int]) -> bool:
    """Every related pair (e, e') has e ranked before e'."""
    rank = {e: r for r, e in enumerate(order)}
    return all(rank[a] < rank[b] for a, b in cycle_relation(g, t))


def parse_rational(text) -> Fraction:
    return Fraction(str(text))


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
