"""Exhaustive verification of spanner builds.

Stretch checks compare hop distances in ``G - v`` and ``H - v`` for every
source, target and single fault (including no fault).  Distances come from
scipy's compiled BFS, not from the builders' perturbed-order search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as _csgraph_sp

from .errors import NotASubgraph
from .graph import Edge, Graph, SubgraphView, edge, hop_distances
from .records import Spanner
from .replacement import ReplacementCache

INF = math.inf


@dataclass
class StretchReport:
    beta: int
    exact: bool = False
    checked: int = 0
    violations: List[Tuple[int, int, Optional[int], float, float]] = field(default_factory=list)
    max_observed_stretch: float = 0
    infinite_pairs: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> Dict[str, object]:
        def num(x):
            return "inf" if x == INF else int(x)

        return {
            "beta": self.beta,
            "exact": self.exact,
            "checked": self.checked,
            "num_violations": len(self.violations),
            "violations": [[s, t, v, num(a), num(b)] for s, t, v, a, b in self.violations[:20]],
            "max_observed_stretch": num(self.max_observed_stretch),
            "infinite_pairs": self.infinite_pairs,
            "passed": self.passed,
        }


def _edge_array(edges) -> np.ndarray:
    arr = np.array(sorted(edges), dtype=np.int64)
    return arr.reshape(-1, 2)


def fault_distances(n: int, edges: np.ndarray, v: Optional[int], sources: Sequence[int]) -> np.ndarray:
    """Hop distances from ``sources`` in the graph minus ``v`` (rows follow ``sources``).

    Entries for the deleted vertex, and rows for a deleted source, are inf.
    """
    if v is not None and len(edges):
        keep = (edges[:, 0] != v) & (edges[:, 1] != v)
        edges = edges[keep]
    out = np.full((len(sources), n), INF)
    live = [i for i, s in enumerate(sources) if s != v]
    if not live or n == 0:
        return out
    a = csr_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    d = _csgraph_sp(a, method="D", directed=False, unweighted=True,
                    indices=[sources[i] for i in live])
    out[live] = d
    if v is not None:
        out[:, v] = INF
    return out


def _check(g: Graph, h_edges, beta: int, sources, exact: bool) -> StretchReport:
    h_set = {edge(*e) for e in h_edges}
    if not h_set <= g.edge_set:
        raise NotASubgraph(f"edge {min(h_set - g.edge_set)} is not in the host graph")
    n = g.n
    srcs = list(range(n)) if sources is None else sorted(set(sources))
    ge, he = _edge_array(g.edges), _edge_array(h_set)
    rep = StretchReport(beta=beta, exact=exact)
    worst = 0.0
    src_arr = np.array(srcs, dtype=np.int64)
    base_mask = np.arange(n)[None, :] != src_arr[:, None]
    for v in [None, *range(n)]:
        dg = fault_distances(n, ge, v, srcs)
        dh = fault_distances(n, he, v, srcs)
        mask = base_mask.copy()
        if v is not None:
            mask[:, v] = False
            mask[src_arr == v, :] = False
        rep.checked += int(mask.sum())
        inf_g = np.isinf(dg)
        rep.infinite_pairs += int((inf_g & mask).sum())
        fin = mask & ~inf_g
        if fin.any():
            gap = dh[fin] - dg[fin]
            worst = max(worst, float(gap.max()))
        bad = fin & ((dh != dg) if exact else (dh > dg + beta))
        for row, t in zip(*np.nonzero(bad)):
            rep.violations.append((srcs[row], int(t), v, float(dh[row, t]), float(dg[row, t])))
    rep.max_observed_stretch = worst
    return rep


def check_stretch(g: Graph, h_edges, beta: int, sources=None) -> StretchReport:
    """``dist(s,t,H-v) <= dist(s,t,G-v) + beta`` for all sources, targets and faults.

    ``sources=None`` means every vertex. Pairs disconnected in ``G - v`` pass.
    """
    return _check(g, h_edges, beta, sources, exact=False)


def check_ftmbfs_exact(g: Graph, h_edges, sources) -> StretchReport:
    return _check(g, h_edges, 0, sources, exact=True)


def check_spanner(g: Graph, sp: Spanner) -> StretchReport:
    if sp.kind == "ftmbfs":
        return check_ftmbfs_exact(g, sp.edges, sp.sources)
    return check_stretch(g, sp.edges, sp.beta, sp.sources)


@dataclass
class StructuralReport:
    failures: List[str] = field(default_factory=list)
    checks: Dict[str, int] = field(default_factory=dict)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def count(self, name: str, k: int = 1) -> None:
        self.checks[name] = self.checks.get(name, 0) + k


def _check_clustering(g: Graph, c, rep: StructuralReport, label: str) -> None:
    for v in sorted(c.heavy):
        rep.count("two_cover")
        zs = [c.z1.get(v), c.z2.get(v)]
        nz = sum(1 for u in g.neighbors(v) if u in c.centers)
        if None in zs or zs[0] == zs[1] or nz < 2 or \
                any(z not in c.centers or not g.has_edge(v, z) for z in zs):
            rep.fail(f"[{label}] two-cover violated at heavy vertex {v}: centers {zs}")
    gd = c.g_delta_edges
    gd_view = SubgraphView(_EdgeSetAdjacency(g.n, gd))
    for z, members in c.clusters.items():
        rep.count("cluster_diameter")
        for u in members:
            d = hop_distances(gd_view, [u])
            far = [x for x in members if d.get(x, INF) > 2]
            if far:
                rep.fail(f"[{label}] cluster {z}: {u} and {far[0]} farther than 2 in G_delta")
                break
    for e in g.edges:
        if e in gd:
            continue
        rep.count("missing_edge_heavy")
        if e[0] not in c.heavy and e[1] not in c.heavy:
            rep.fail(f"[{label}] edge {e} missing from G_delta has no heavy endpoint")


class _EdgeSetAdjacency:
    def __init__(self, n, edges):
        self.n = n
        self._adj = [[] for _ in range(n)]
        for u, v in edges:
            self._adj[u].append(v)
            self._adj[v].append(u)

    def neighbors(self, u):
        return self._adj[u]


def _check_heavy_on_paths(g: Graph, c, sources, w, rep: StructuralReport, label: str) -> None:
    bound = math.ceil(3 * g.n / c.delta)
    cache = ReplacementCache(g, w)
    worst = 0
    for s in sources:
        t0 = cache.tree(s)
        children = t0.children()
        for v in sorted(t0.reachable()):
            if v == s or not children[v]:
                continue
            tv = cache.tree(s, v)
            stack = list(children[v])
            while stack:
                t = stack.pop()
                stack.extend(children[t])
                p = tv.path_to(t)
                if p is None:
                    continue
                rep.count("heavy_on_path")
                k = sum(1 for x in p.vertices if x in c.heavy)
                worst = max(worst, k)
                if k > bound:
                    rep.fail(f"[{label}] P({s},{t},{v}) has {k} heavy vertices > {bound}")
    rep.notes[f"{label}_max_heavy_on_path"] = worst
    rep.notes[f"{label}_heavy_bound"] = bound


def check_structural(g: Graph, sp: Spanner) -> StructuralReport:
    rep = StructuralReport()
    if not set(sp.edges) <= g.edge_set:
        rep.fail("spanner is not a subgraph of the input")
    for layer in sp.layers:
        c = layer.clustering
        label = layer.name
        _check_clustering(g, c, rep, label)
        if layer.sources:
            _check_heavy_on_paths(g, c, layer.sources, sp.weights, rep, label)
        k = len(layer.sources)
        for t, es in layer.local_edges.items():
            rep.count("local_edges")
            if len(es) > 2 * k:
                rep.fail(f"[{label}] |E_local({t})| = {len(es)} > 2|S| = {2 * k}")
        for pair, cnt in layer.pair_counts.items():
            rep.count("pair_counts")
            if cnt > 5:
                rep.fail(f"[{label}] cluster pair {pair} credited {cnt} > 5 times")
        for rec in layer.buy_log:
            if rec.rule == "h8" and rec.bought:
                rep.count("cost_value")
                if rec.cost > 4 * rec.value:
                    rep.fail(f"[{label}] bought {rec.path_id} with cost {rec.cost} > 4*{rec.value}")
        rep.notes[f"{label}_max_pair_count"] = max(layer.pair_counts.values(), default=0)
        rep.notes[f"{label}_num_centers"] = len(c.centers)
    return rep


def size_normalizer(kind: str, n: int, num_sources: int = 0) -> float:
    """The size bound each kind is measured against, without polylog factors."""
    k = max(num_sources, 1)
    if kind == "2add":
        return n ** (5 / 3)
    if kind == "6add":
        return n ** 1.5
    if kind == "8sw":
        return n ** (4 / 3)
    if kind == "4sw":
        return max(k * n, (n / k) ** 3)
    if kind == "ftmbfs":
        return math.sqrt(k) * n ** 1.5
    raise ValueError(f"unknown spanner kind {kind!r}")


def size_report(sp: Spanner, g: Graph) -> Dict[str, object]:
    """Edge counts and normalized size ratios. Reported, never asserted."""
    n = g.n
    size = len(sp.edges)

    def ratio(den):
        return size / den if n > 0 else 0.0

    return {
        "edges": size,
        "input_edges": g.m,
        "per_tag": sp.tag_counts(),
        "ratio": ratio(size_normalizer(sp.kind, n, len(sp.sources or ()))),
        "ratio_n5_3": ratio(n ** (5 / 3)),
        "ratio_n3_2": ratio(n ** 1.5),
        "ratio_n4_3": ratio(n ** (4 / 3)),
    }
