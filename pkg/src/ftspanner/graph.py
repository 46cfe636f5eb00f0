"""Graph substrate: simple undirected graphs, perturbed tie-breaking weights,
unique shortest paths, BFS trees with set-LCA, and vertex-deleted views.

Paths are ordered lexicographically by ``(hop_len, pert_sum)``.  Distances
reported anywhere in the package are hop counts; the perturbation only
selects which of the equal-hop paths is *the* shortest path.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import EdgeNotInGraph, PerturbationTie, VertexOutsideTree

Edge = Tuple[int, int]

PERTURBATION_BITS = 62


def edge(u: int, v: int) -> Edge:
    """Canonical (smaller id first) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "edge_set", "adj")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = edge(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
        nbrs: List[List[int]] = [[] for _ in range(n)]
        for u, v in seen:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.n = n
        self.edges: Tuple[Edge, ...] = tuple(sorted(seen))
        self.edge_set: FrozenSet[Edge] = frozenset(seen)
        self.adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> Tuple[int, ...]:
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edge_set

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class EdgeSubgraph:
    """Growable edge subset of a host graph (used for the path-buying G_tau)."""

    def __init__(self, host: Graph, edges: Iterable[Edge] = ()):
        self.host = host
        self.n = host.n
        self.edge_set = set()
        self._adj: List[set] = [set() for _ in range(host.n)]
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> bool:
        e = edge(u, v)
        if e in self.edge_set:
            return False
        if e not in self.host.edge_set:
            raise EdgeNotInGraph(f"edge {e} not in host graph")
        self.edge_set.add(e)
        self._adj[u].add(v)
        self._adj[v].add(u)
        return True

    def add_path(self, vertices: Sequence[int]) -> int:
        return sum(self.add_edge(a, b) for a, b in zip(vertices, vertices[1:]))

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edge_set

    def neighbors(self, u: int):
        return self._adj[u]

    def __len__(self):
        return len(self.edge_set)


@dataclass(frozen=True)
class PerturbedWeights:
    """Per-edge positive integer perturbations, pairwise distinct."""

    seed: int
    r: Dict[Edge, int]
    # by_vertex[u][x] == r[edge(u, x)]; a lookup table for the hot loops
    by_vertex: Tuple[Dict[int, int], ...] = field(repr=False, compare=False)

    def __getitem__(self, e: Edge) -> int:
        return self.r[edge(*e)]

    def path_sum(self, vertices: Sequence[int]) -> int:
        return sum(self.by_vertex[a][b] for a, b in zip(vertices, vertices[1:]))


def assign_perturbation(g: Graph, seed: int) -> PerturbedWeights:
    rng = random.Random(seed)
    used = set()
    r: Dict[Edge, int] = {}
    for e in g.edges:
        x = rng.getrandbits(PERTURBATION_BITS) + 1
        while x in used:
            x = rng.getrandbits(PERTURBATION_BITS) + 1
        used.add(x)
        r[e] = x
    by_vertex: Tuple[Dict[int, int], ...] = tuple({} for _ in range(g.n))
    for (u, v), x in r.items():
        by_vertex[u][v] = x
        by_vertex[v][u] = x
    return PerturbedWeights(seed=seed, r=r, by_vertex=by_vertex)


@dataclass(frozen=True)
class Path:
    vertices: Tuple[int, ...]
    pert_sum: int = 0

    @property
    def hop_len(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    def key(self) -> Tuple[int, int]:
        return (self.hop_len, self.pert_sum)

    def edges(self) -> List[Edge]:
        vs = self.vertices
        return [edge(a, b) for a, b in zip(vs, vs[1:])]

    def last_edge(self) -> Optional[Edge]:
        if len(self.vertices) < 2:
            return None
        return edge(self.vertices[-2], self.vertices[-1])

    def index(self, u: int) -> int:
        return self.vertices.index(u)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, u):
        return u in self.vertices


@dataclass(frozen=True)
class SubgraphView:
    """Non-materialized ``base minus deleted_vertices minus deleted_edges``.

    ``base`` is anything exposing ``n`` and ``neighbors(u)``: a Graph or an
    EdgeSubgraph.
    """

    base: object
    deleted_vertices: FrozenSet[int] = frozenset()
    deleted_edges: FrozenSet[Edge] = frozenset()

    @property
    def n(self) -> int:
        return self.base.n

    def is_deleted(self, u: int) -> bool:
        return u in self.deleted_vertices

    def neighbors(self, u: int) -> Iterator[int]:
        if u in self.deleted_vertices:
            return
        dv, de = self.deleted_vertices, self.deleted_edges
        for x in self.base.neighbors(u):
            if x in dv:
                continue
            if de and edge(u, x) in de:
                continue
            yield x


def full_view(g) -> SubgraphView:
    return SubgraphView(g)


def delete_vertices(g, vertices) -> SubgraphView:
    vs = frozenset(v for v in vertices if v is not None)
    return SubgraphView(g, vs)


class ShortestPathTree:
    """Shortest-path tree under the perturbed order, rooted at ``root``.

    ``parent``/``depth``/``pert`` are defined only for reachable vertices.
    """

    def __init__(self, root: int, parent: Dict[int, Optional[int]], depth: Dict[int, int],
                 pert: Dict[int, int]):
        self.root = root
        self.parent = parent
        self.depth = depth
        self.pert = pert
        self._up: Optional[List[Dict[int, int]]] = None

    def __contains__(self, u: int) -> bool:
        return u in self.depth

    def reachable(self):
        return self.depth.keys()

    def path_to(self, t: int) -> Optional[Path]:
        """Root-to-``t`` tree path, or None when ``t`` is unreachable."""
        if t not in self.depth:
            return None
        out = [t]
        p = self.parent[t]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        out.reverse()
        return Path(tuple(out), self.pert[t])

    def edges(self) -> List[Edge]:
        return sorted(edge(u, p) for u, p in self.parent.items() if p is not None)

    def parent_edge(self, t: int) -> Optional[Edge]:
        p = self.parent.get(t)
        return None if p is None else edge(p, t)

    def children(self) -> Dict[int, List[int]]:
        ch: Dict[int, List[int]] = {u: [] for u in self.depth}
        for u, p in self.parent.items():
            if p is not None:
                ch[p].append(u)
        return ch

    def _lifting(self) -> List[Dict[int, int]]:
        if self._up is None:
            up0 = {u: (p if p is not None else u) for u, p in self.parent.items()}
            up = [up0]
            span = max(self.depth.values(), default=0)
            k = 1
            while (1 << k) <= span:
                prev = up[-1]
                up.append({u: prev[prev[u]] for u in prev})
                k += 1
            self._up = up
        return self._up

    def ancestor_at_depth(self, u: int, d: int) -> int:
        up = self._lifting()
        diff = self.depth[u] - d
        k = 0
        while diff:
            if diff & 1:
                u = up[k][u]
            diff >>= 1
            k += 1
        return u

    def is_ancestor(self, a: int, u: int) -> bool:
        """True when ``a`` lies on the root-to-``u`` path (inclusive)."""
        if a not in self.depth or u not in self.depth:
            return False
        da = self.depth[a]
        if da > self.depth[u]:
            return False
        return self.ancestor_at_depth(u, da) == a

    def lca(self, a: int, b: int) -> int:
        for x in (a, b):
            if x not in self.depth:
                raise VertexOutsideTree(f"vertex {x} not reachable from root {self.root}")
        up = self._lifting()
        if self.depth[a] < self.depth[b]:
            a, b = b, a
        a = self.ancestor_at_depth(a, self.depth[b])
        if a == b:
            return a
        for k in range(len(up) - 1, -1, -1):
            if up[k][a] != up[k][b]:
                a, b = up[k][a], up[k][b]
        return self.parent[a]


def _lex_bfs(s: int, view: SubgraphView, w: PerturbedWeights, stop: Optional[int] = None):
    """Layered BFS picking, for every vertex, the parent minimizing the
    perturbation sum. Within a layer every candidate parent already has its
    final sum, so the minimum is exact."""
    deleted = view.deleted_vertices
    if s in deleted:
        raise ValueError(f"source {s} is deleted in the view")
    de = view.deleted_edges
    base = view.base
    wv = w.by_vertex
    parent: Dict[int, Optional[int]] = {s: None}
    depth = {s: 0}
    pert = {s: 0}
    frontier = [s]
    d = 0
    while frontier:
        if stop is not None and stop in depth:
            break
        d += 1
        best: Dict[int, List[int]] = {}
        for u in frontier:
            cu = pert[u]
            wu = wv[u]
            for x in base.neighbors(u):
                if x in depth or x in deleted:
                    continue
                if de and edge(u, x) in de:
                    continue
                c = cu + wu[x]
                b = best.get(x)
                if b is None or c < b[0]:
                    best[x] = [c, u, 0]
                elif c == b[0]:
                    b[2] = 1
        nxt = []
        for x, (c, u, tied) in best.items():
            if tied:
                raise PerturbationTie(
                    f"tie reaching vertex {x} from {s} (seed {w.seed})")
            parent[x] = u
            depth[x] = d
            pert[x] = c
            nxt.append(x)
        nxt.sort()
        frontier = nxt
    return parent, depth, pert


def bfs_tree(s: int, view: SubgraphView, w: PerturbedWeights) -> ShortestPathTree:
    parent, depth, pert = _lex_bfs(s, view, w)
    return ShortestPathTree(s, parent, depth, pert)


def shortest_path(s: int, t: int, view: SubgraphView, w: PerturbedWeights) -> Optional[Path]:
    """The unique minimum ``(hop_len, pert_sum)`` s-t path, or None if unreachable."""
    if t in view.deleted_vertices:
        raise ValueError(f"target {t} is deleted in the view")
    parent, depth, pert = _lex_bfs(s, view, w, stop=t)
    return ShortestPathTree(s, parent, depth, pert).path_to(t)


def lca_of_set(tree: ShortestPathTree, vs: Iterable[int]) -> int:
    it = iter(vs)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("lca_of_set needs a nonempty vertex set") from None
    if acc not in tree:
        raise VertexOutsideTree(f"vertex {acc} not reachable from root {tree.root}")
    for x in it:
        acc = tree.lca(acc, x)
    return acc


def union_edges(parts: Iterable[Iterable[Edge]], host: Optional[Graph] = None) -> List[Edge]:
    """Duplicate-free sorted union of edge collections."""
    out = set()
    for part in parts:
        for e in part:
            out.add(edge(*e))
    if host is not None:
        foreign = out - host.edge_set
        if foreign:
            raise EdgeNotInGraph(f"edge {min(foreign)} not in host graph")
    return sorted(out)


def hop_distances(view: SubgraphView, sources: Iterable[int]) -> Dict[int, int]:
    """Plain multi-source BFS hop distances over the view."""
    dist: Dict[int, int] = {}
    q = deque()
    for s in sources:
        if s not in dist and not view.is_deleted(s):
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for x in view.neighbors(u):
            if x not in dist:
                dist[x] = du
                q.append(x)
    return dist
