"""Replacement paths P(s, t, v): the perturbed-unique shortest s-t path
avoiding a failed vertex v, plus divergence point, detour and last edge."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .graph import (Edge, Graph, Path, PerturbedWeights, ShortestPathTree, bfs_tree,
                    delete_vertices, full_view, shortest_path)


@dataclass(frozen=True)
class ReplacementPath:
    s: int
    t: int
    v: Optional[int]
    path: Optional[Path]
    base: Optional[Path]
    divergence: Optional[int] = None

    @property
    def reachable(self) -> bool:
        return self.path is not None

    @property
    def last_edge(self) -> Optional[Edge]:
        return None if self.path is None else self.path.last_edge()

    @property
    def detour(self) -> Optional[Tuple[int, ...]]:
        if self.divergence is None or self.path is None:
            return None
        vs = self.path.vertices
        return vs[vs.index(self.divergence):]

    @property
    def detour_plus(self) -> Optional[Tuple[int, ...]]:
        d = self.detour
        return None if d is None else d[1:]


def divergence_point(path: Path, base: Path) -> Optional[int]:
    """Last vertex of the common prefix, or None when the paths coincide."""
    a, b = path.vertices, base.vertices
    if a == b:
        return None
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    return a[i - 1]


def make_replacement(s, t, v, path: Optional[Path], base: Optional[Path]) -> ReplacementPath:
    div = None
    if path is not None and base is not None:
        div = divergence_point(path, base)
    return ReplacementPath(s=s, t=t, v=v, path=path, base=base, divergence=div)


def replacement_path(s: int, t: int, v: Optional[int], g: Graph,
                     w: PerturbedWeights) -> ReplacementPath:
    if s == t:
        raise ValueError("replacement paths need s != t")
    if v in (s, t):
        raise ValueError("the failed vertex must differ from both endpoints")
    base = shortest_path(s, t, full_view(g), w)
    if v is None or base is None or v not in base:
        return make_replacement(s, t, v, base, base)
    path = shortest_path(s, t, delete_vertices(g, [v]), w)
    return make_replacement(s, t, v, path, base)


def is_new_ending(rp: ReplacementPath, baseline) -> bool:
    if rp.path is None:
        raise ValueError("unreachable replacement path has no last edge")
    return rp.last_edge not in baseline


def enumerate_faults(s: int, t: int, g: Graph, w: PerturbedWeights) -> List[ReplacementPath]:
    base = shortest_path(s, t, full_view(g), w)
    if base is None:
        raise ValueError(f"{t} unreachable from {s}")
    return [replacement_path(s, t, v, g, w) for v in base.vertices[1:-1]]


class ReplacementCache:
    """Memoized replacement paths: one tree of G minus v per (s, v) serves every t."""

    def __init__(self, g: Graph, w: PerturbedWeights):
        self.g = g
        self.w = w
        self._trees: Dict[Tuple[int, Optional[int]], ShortestPathTree] = {}

    def tree(self, s: int, v: Optional[int] = None) -> ShortestPathTree:
        key = (s, v)
        tr = self._trees.get(key)
        if tr is None:
            view = full_view(self.g) if v is None else delete_vertices(self.g, [v])
            tr = bfs_tree(s, view, self.w)
            self._trees[key] = tr
        return tr

    def base_path(self, s: int, t: int) -> Optional[Path]:
        return self.tree(s).path_to(t)

    def get(self, s: int, t: int, v: Optional[int]) -> ReplacementPath:
        base = self.base_path(s, t)
        if v is None or base is None or not self.tree(s).is_ancestor(v, t):
            return make_replacement(s, t, v, base, base)
        return make_replacement(s, t, v, self.tree(s, v).path_to(t), base)

    def last_edge(self, s: int, t: int, v: Optional[int]) -> Optional[Edge]:
        """Last edge of P(s, t, v) without materializing the path."""
        tr = self.tree(s) if v is None or not self.tree(s).is_ancestor(v, t) else self.tree(s, v)
        return tr.parent_edge(t)
