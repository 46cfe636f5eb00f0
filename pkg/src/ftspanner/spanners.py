"""All-pairs and sourcewise fault-tolerant additive spanners.

An all-pairs spanner with stretch ``beta`` is the clustering graph joined
with a ``(beta - 2)``-stretch sourcewise structure for the cluster centers.
"""
from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, Set

from .clustering import build_clustering
from .ftmbfs import build_ftmbfs
from .graph import Edge, Graph, PerturbedWeights
from .records import Layer, Spanner, tag_edges, with_tie_retry
from .replacement import ReplacementCache
from .sourcewise import build_h4_with_weights, build_h8_with_weights

log = logging.getLogger(__name__)

KINDS = ("2add", "6add", "4sw", "8sw", "ftmbfs")
BETA = {"2add": 2, "6add": 6, "4sw": 4, "8sw": 8, "ftmbfs": 0}
SOURCEWISE_KINDS = ("4sw", "8sw", "ftmbfs")


def ceil_root(n: int, num: int, den: int) -> int:
    """Smallest integer d >= 0 with d**den >= n**num, i.e. ceil(n^(num/den))."""
    target = n ** num
    d = max(0, int(round(target ** (1.0 / den))) - 2)
    while d ** den < target:
        d += 1
    return d


def _assemble(kind, g, seed, w, provenance, layers, sources, extra) -> Spanner:
    edges = tuple(sorted(provenance))
    params = {"kind": kind, "n": g.n, "m": g.m, "seed": seed, "effective_seed": w.seed}
    params.update(extra)
    return Spanner(kind=kind, beta=BETA[kind], edges=edges,
                   provenance={e: provenance[e] for e in edges}, params=params,
                   sources=sources, weights=w, layers=layers)


def _two_add(g: Graph, seed: int, w: PerturbedWeights) -> Spanner:
    delta = max(ceil_root(g.n, 2, 3), 2)
    c = build_clustering(g, delta)
    prov: Dict[Edge, Set[str]] = {}
    tag_edges(prov, c.g_delta_edges, "cluster")
    if c.centers:
        build_ftmbfs(g, c.centers, w, ReplacementCache(g, w), prov)
    layer = Layer("outer", c, tuple(sorted(c.centers)))
    return _assemble("2add", g, seed, w, prov, [layer], None,
                     {"delta": c.delta, "num_centers": len(c.centers), "num_heavy": len(c.heavy)})


def build_2add(g: Graph, seed: int = 0) -> Spanner:
    return with_tie_retry(g, seed, lambda w: _two_add(g, seed, w))


def _six_add(g: Graph, seed: int, w: PerturbedWeights) -> Spanner:
    delta = max(ceil_root(g.n, 1, 2), 2)
    c = build_clustering(g, delta)
    prov: Dict[Edge, Set[str]] = {}
    tag_edges(prov, c.g_delta_edges, "cluster")
    layers = [Layer("outer", c, tuple(sorted(c.centers)))]
    extra = {"delta": c.delta, "num_centers": len(c.centers), "num_heavy": len(c.heavy)}
    if c.centers:
        inner = build_h4_with_weights(g, c.centers, w)
        for e, tags in inner.provenance.items():
            prov.setdefault(e, set()).update(tags)
        layers.extend(inner.layers)
        extra["inner_delta"] = inner.params["delta"]
        extra["inner_num_centers"] = inner.params["num_centers"]
    return _assemble("6add", g, seed, w, prov, layers, None, extra)


def build_6add(g: Graph, seed: int = 0) -> Spanner:
    return with_tie_retry(g, seed, lambda w: _six_add(g, seed, w))


def build_4sw(g: Graph, sources: Iterable[int], seed: int = 0) -> Spanner:
    S = sorted(set(sources))
    return with_tie_retry(g, seed, lambda w: build_h4_with_weights(g, S, w, seed))


def eight_sw_source_limit(n: int) -> int:
    if n <= 1:
        return 1
    return math.ceil(n ** (1 / 3) * math.log(n))


def build_8sw(g: Graph, sources: Iterable[int], seed: int = 0) -> Spanner:
    S = sorted(set(sources))
    if len(S) > eight_sw_source_limit(g.n):
        log.warning("%d sources exceed ceil(n^(1/3) ln n) = %d; the n^(4/3) size regime no longer applies",
                    len(S), eight_sw_source_limit(g.n))
    return with_tie_retry(g, seed, lambda w: build_h8_with_weights(g, S, w, seed))


def _ftmbfs(g: Graph, S, seed: int, w: PerturbedWeights) -> Spanner:
    prov: Dict[Edge, Set[str]] = {}
    build_ftmbfs(g, S, w, ReplacementCache(g, w), prov)
    return _assemble("ftmbfs", g, seed, w, prov, [], tuple(S), {"num_sources": len(S)})


def build_ftmbfs_spanner(g: Graph, sources: Iterable[int], seed: int = 0) -> Spanner:
    S = sorted(set(sources))
    return with_tie_retry(g, seed, lambda w: _ftmbfs(g, S, seed, w))


def build(kind: str, g: Graph, sources=None, seed: int = 0) -> Spanner:
    if kind == "2add":
        return build_2add(g, seed)
    if kind == "6add":
        return build_6add(g, seed)
    if kind not in SOURCEWISE_KINDS:
        raise ValueError(f"unknown spanner kind {kind!r}")
    if not sources:
        raise ValueError(f"kind {kind} needs a nonempty source set")
    if kind == "4sw":
        return build_4sw(g, sources, seed)
    if kind == "8sw":
        return build_8sw(g, sources, seed)
    return build_ftmbfs_spanner(g, sources, seed)
