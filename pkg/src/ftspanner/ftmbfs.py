"""Exact single-fault multi-source BFS structure: source trees plus the last
edge of every new-ending replacement path."""
from __future__ import annotations

from typing import Dict, Iterable, Optional, Set

from .graph import Edge, Graph, PerturbedWeights
from .replacement import ReplacementCache


def build_ftmbfs(g: Graph, sources: Iterable[int], w: PerturbedWeights,
                 cache: Optional[ReplacementCache] = None,
                 provenance: Optional[Dict[Edge, Set[str]]] = None) -> Set[Edge]:
    sources = sorted(set(sources))
    if not sources:
        raise ValueError("build_ftmbfs needs at least one source")
    cache = cache or ReplacementCache(g, w)
    out: Set[Edge] = set()
    new_last: Set[Edge] = set()
    for s in sources:
        t0 = cache.tree(s)
        out.update(t0.edges())
        children = t0.children()
        for v in sorted(t0.reachable()):
            if v == s or not children[v]:
                continue
            tv = cache.tree(s, v)
            # v is internal to pi(s, t) exactly for the strict descendants t of v
            stack = list(children[v])
            while stack:
                t = stack.pop()
                stack.extend(children[t])
                e = tv.parent_edge(t)
                if e is not None and e != t0.parent_edge(t):
                    new_last.add(e)
    if provenance is not None:
        for e in out:
            provenance.setdefault(e, set()).add("tree")
        for e in new_last:
            provenance.setdefault(e, set()).add("ftmbfs")
    return out | new_last
