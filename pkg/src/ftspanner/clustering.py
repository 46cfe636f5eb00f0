"""Heavy/light classification and the fault-tolerant clustering graph.

Every Delta-heavy vertex gets two distinct center neighbors so that one of
its clusters survives any single vertex fault.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import UnclusteredVertex, UncoverableVertex
from .graph import Edge, Graph, edge


def heavy_vertices(g: Graph, delta: int) -> FrozenSet[int]:
    if delta < 1:
        raise ValueError("delta must be >= 1")
    return frozenset(v for v in g.vertices() if g.degree(v) >= delta)


def ft_center_set(g: Graph, delta: int, heavy) -> FrozenSet[int]:
    """Greedy 2-multicover of the heavy vertices by their neighborhoods.

    Each heavy vertex demands two center neighbors. Repeatedly take the
    vertex covering the most outstanding demand, smallest id on ties.
    """
    need = {}
    for v in heavy:
        if g.degree(v) < 2:
            raise UncoverableVertex(f"heavy vertex {v} has fewer than two neighbors")
        need[v] = 2
    centers = set()
    # gain[u] = number of heavy neighbors of u that still need a center
    gain = [0] * g.n
    for v in need:
        for u in g.neighbors(v):
            gain[u] += 1
    while any(need.values()):
        best = max((u for u in g.vertices() if u not in centers),
                   key=lambda u: (gain[u], -u))
        if gain[best] == 0:  # pragma: no cover - unreachable when degrees >= 2
            raise UncoverableVertex("greedy cover stalled")
        centers.add(best)
        for v in g.neighbors(best):
            if need.get(v):
                need[v] -= 1
                if need[v] == 0:
                    for u in g.neighbors(v):
                        gain[u] -= 1
    return frozenset(centers)


@dataclass(frozen=True)
class Clustering:
    delta: int
    heavy: FrozenSet[int]
    centers: FrozenSet[int]
    z1: Dict[int, int]
    z2: Dict[int, int]
    clusters: Dict[int, FrozenSet[int]]
    g_delta_edges: FrozenSet[Edge]

    def is_heavy(self, v: int) -> bool:
        return v in self.heavy

    def primary_cluster(self, t: int) -> Tuple[int, FrozenSet[int]]:
        if t not in self.heavy:
            raise UnclusteredVertex(f"vertex {t} is light")
        z = self.z1[t]
        return z, self.clusters[z]


def effective_delta(delta: int) -> int:
    return max(int(delta), 2)


def build_clustering(g: Graph, delta: int, heavy=None, centers=None) -> Clustering:
    """Build the clustering graph for ``max(delta, 2)``.

    ``heavy``/``centers`` may be passed when already computed.
    """
    delta = effective_delta(delta)
    if heavy is None:
        heavy = heavy_vertices(g, delta)
    if centers is None:
        centers = ft_center_set(g, delta, heavy)
    z1: Dict[int, int] = {}
    z2: Dict[int, int] = {}
    members: Dict[int, set] = {z: {z} for z in centers}
    gd = set()
    for v in sorted(heavy):
        zs = [u for u in g.neighbors(v) if u in centers]
        if len(zs) < 2:
            raise UncoverableVertex(f"heavy vertex {v} has fewer than two centers")
        z1[v], z2[v] = zs[0], zs[1]
        members[zs[0]].add(v)
        members[zs[1]].add(v)
        gd.add(edge(v, zs[0]))
        gd.add(edge(v, zs[1]))
    for v in g.vertices():
        if v not in heavy:
            for u in g.neighbors(v):
                gd.add(edge(u, v))
    return Clustering(
        delta=delta,
        heavy=frozenset(heavy),
        centers=frozenset(centers),
        z1=z1,
        z2=z2,
        clusters={z: frozenset(c) for z, c in sorted(members.items())},
        g_delta_edges=frozenset(gd),
    )


def surviving_center(c: Clustering, t: int, v: Optional[int]) -> Tuple[int, FrozenSet[int]]:
    """Center of ``t`` that survives the fault ``v``, with its cluster."""
    if t not in c.heavy:
        raise UnclusteredVertex(f"vertex {t} is light")
    z = c.z1[t] if c.z1[t] != v else c.z2[t]
    return z, c.clusters[z]


def center_set_size_bound(n: int, delta: int) -> int:
    """Soft sanity bound logged by the structural checks, never asserted."""
    if n <= 1:
        return 0
    return 2 * math.ceil(n / delta) * math.ceil(math.log(n) + 1)
