"""Sourcewise fault-tolerant spanners with additive stretch 4 and 8.

Both builders share the preparation phase:

* cluster with ``Delta = |S|`` (clamped to 2),
* split each ``pi(s, t)`` of a heavy target at the LCA of its primary cluster
  in the source tree,
* collect the local last edges (faults at ``z1(t)`` and at that LCA),
* classify new-ending replacement paths for far faults into dependent paths
  (whose last edges are kept outright) and independent ones,

and then differ in how the independent paths are bought.  The stretch-4
rule buys a whole path when it brings the two relevant clusters closer; the
stretch-8 rule buys only a suffix, and only when its cost is paid for by
enough improved cluster pairs.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .clustering import Clustering, build_clustering, surviving_center
from .errors import ClusteringViolation, FTSpannerError
from .graph import (Edge, EdgeSubgraph, Graph, Path, PerturbedWeights, SubgraphView,
                    edge, hop_distances)
from .records import BuyRecord, Layer, Spanner, tag_edges, with_tie_retry
from .replacement import ReplacementCache, ReplacementPath, is_new_ending

INF = math.inf

#: cheap/costly threshold and cost-to-value ratio of the stretch-8 rule
CHEAP_MAX_COST = 4
COST_PER_VALUE = 4
#: minimum spacing along Q between representative vertices
U_SPACING = 3


class ClusterUnreachable(FTSpannerError):
    pass


class SourceTrees:
    """Fault-free shortest-path trees of every source, with T(t, S) lookups."""

    def __init__(self, sources: Iterable[int], cache: ReplacementCache):
        self.sources = tuple(sorted(set(sources)))
        self.cache = cache
        self._toward: Dict[int, FrozenSet[int]] = {}
        self._lca: Dict[Tuple[int, FrozenSet[int]], Optional[int]] = {}

    def tree(self, s: int):
        return self.cache.tree(s)

    def pi(self, s: int, t: int) -> Optional[Path]:
        return self.cache.tree(s).path_to(t)

    def toward(self, t: int) -> FrozenSet[int]:
        """Vertex set of T(t, S), the union of pi(s', t) over all sources."""
        out = self._toward.get(t)
        if out is None:
            acc = set()
            for s in self.sources:
                p = self.pi(s, t)
                if p is not None:
                    acc.update(p.vertices)
            out = self._toward[t] = frozenset(acc)
        return out

    def lca(self, s: int, members: FrozenSet[int]) -> Optional[int]:
        """LCA in T0(s) of the reachable members, None when none is reachable."""
        key = (s, members)
        if key not in self._lca:
            tr = self.tree(s)
            acc = None
            for x in sorted(members):
                if x in tr:
                    acc = x if acc is None else tr.lca(acc, x)
            self._lca[key] = acc
        return self._lca[key]


@dataclass(frozen=True)
class Segmentation:
    s: int
    t: int
    ell: int
    far: FrozenSet[int]
    near: FrozenSet[int]
    far_order: Tuple[int, ...] = ()


@dataclass(frozen=True)
class FarPathRecord:
    rp: ReplacementPath
    kind: str  # "dependent" | "independent"

    @property
    def dependent(self) -> bool:
        return self.kind == "dependent"


@dataclass
class BuilderState:
    g_tau: EdgeSubgraph
    buy_log: List[BuyRecord] = field(default_factory=list)
    pair_counts: Counter = field(default_factory=Counter)


def segment(s: int, t: int, c: Clustering, trees: SourceTrees) -> Segmentation:
    _, members = c.primary_cluster(t)
    ell = trees.lca(s, members)
    path = trees.pi(s, t)
    if ell is None or path is None:
        raise ClusterUnreachable(f"cluster of {t} unreachable from {s}")
    vs = path.vertices
    i = vs.index(ell)
    return Segmentation(s=s, t=t, ell=ell, far=frozenset(vs[:i]),
                        near=frozenset(vs[i + 1:]), far_order=vs[:i])


def local_fault_candidates(s: int, t: int, c: Clustering, trees: SourceTrees) -> List[int]:
    ell = segment(s, t, c, trees).ell
    out = []
    for v in (c.z1[t], ell):
        if v not in (s, t) and v not in out:
            out.append(v)
    return out


def local_edges(sources: Iterable[int], t: int, c: Clustering, trees: SourceTrees) -> FrozenSet[Edge]:
    """Last edges of the replacement paths for faults at z1(t) and at the LCA."""
    out = set()
    cache = trees.cache
    for s in sorted(set(sources)):
        if s == t or t not in trees.tree(s):
            continue
        for v in local_fault_candidates(s, t, c, trees):
            e = cache.last_edge(s, t, v)
            if e is not None:
                out.add(e)
    return frozenset(out)


def classify_far(rp: ReplacementPath, seg: Segmentation, trees: SourceTrees,
                 baseline) -> Optional[FarPathRecord]:
    if rp.path is None or rp.v not in seg.far:
        return None
    if not is_new_ending(rp, baseline):
        return None
    dplus = set(rp.detour_plus)
    dependent = (dplus & trees.toward(rp.t)) != {rp.t}
    return FarPathRecord(rp, "dependent" if dependent else "independent")


def forbidden_vertices(members: FrozenSet[int], sources: Iterable[int],
                       trees: SourceTrees) -> FrozenSet[int]:
    out = set()
    for s in sorted(set(sources)):
        ell = trees.lca(s, members)
        if ell is None:
            continue
        out.update(trees.pi(s, ell).vertices)
    return frozenset(out - members)


def cluster_distance(ca: Iterable[int], cb: Iterable[int], view: SubgraphView):
    """Hop distance between the surviving parts of two clusters (inf if none)."""
    dist = hop_distances(view, ca)
    best = INF
    for b in cb:
        d = dist.get(b)
        if d is not None and d < best:
            best = d
    return best


def first_missing_index(vertices: Sequence[int], g_tau: EdgeSubgraph) -> Optional[int]:
    """Index i of the first edge (vertices[i], vertices[i+1]) absent from g_tau."""
    for i in range(len(vertices) - 1):
        if not g_tau.has_edge(vertices[i], vertices[i + 1]):
            return i
    return None


def count_missing(vertices: Sequence[int], g_tau: EdgeSubgraph) -> int:
    return sum(1 for a, b in zip(vertices, vertices[1:]) if not g_tau.has_edge(a, b))


class _Context:
    """Per-build caches of forbidden sets (they depend only on the cluster)."""

    def __init__(self, g: Graph, sources, c: Clustering, trees: SourceTrees):
        self.g = g
        self.sources = tuple(sorted(set(sources)))
        self.c = c
        self.trees = trees
        self._vf: Dict[int, FrozenSet[int]] = {}

    def vf(self, center: int) -> FrozenSet[int]:
        out = self._vf.get(center)
        if out is None:
            out = self._vf[center] = forbidden_vertices(
                self.c.clusters[center], self.sources, self.trees)
        return out

    def center_of(self, u: int, v: int) -> int:
        if u not in self.c.heavy:
            raise ClusteringViolation(f"vertex {u} incident to a missing edge is light")
        return surviving_center(self.c, u, v)[0]


def _buy4_decision(rp: ReplacementPath, state: BuilderState, ctx: _Context):
    """Returns (fires, x_index, center_x, center_t)."""
    vs = rp.path.vertices
    i = first_missing_index(vs, state.g_tau)
    if i is None:
        return False, None, None, None
    x, t, v = vs[i], rp.t, rp.v
    zx = ctx.center_of(x, v)
    zt = ctx.center_of(t, v)
    lhs = len(vs) - 1 - i
    view = SubgraphView(state.g_tau, ctx.vf(zt))
    rhs = cluster_distance(ctx.c.clusters[zx], ctx.c.clusters[zt], view)
    return lhs < rhs, i, zx, zt


def buy_rule_4(rp: ReplacementPath, state: BuilderState, c: Clustering,
               sources, trees: SourceTrees) -> bool:
    return _buy4_decision(rp, state, _Context(trees.cache.g, sources, c, trees))[0]


def _satisfies_n2(u: int, s: int, v: int, ctx: _Context) -> bool:
    if u not in ctx.c.heavy or u == v:
        return False
    _, members = surviving_center(ctx.c, u, v)
    ell = ctx.trees.lca(s, members)
    if ell is None or ell == v:
        return False
    tr = ctx.trees.tree(s)
    # v strictly below ell on pi(s, u)
    return tr.is_ancestor(v, u) and tr.is_ancestor(ell, v)


def _phi_index(rp: ReplacementPath, state: BuilderState, ctx: _Context) -> int:
    vs = rp.path.vertices
    s, v = rp.s, rp.v
    for i in range(len(vs) - 1, 0, -1):
        if state.g_tau.has_edge(vs[i - 1], vs[i]):
            continue
        if _satisfies_n2(vs[i], s, v, ctx):
            return i
    i = first_missing_index(vs, state.g_tau)
    return len(vs) - 1 if i is None else i


def phi(rp: ReplacementPath, state: BuilderState, c: Clustering, trees: SourceTrees) -> int:
    """Pivot vertex of the stretch-8 rule: the last vertex entered by a missing
    edge whose fault lies below the LCA of its surviving cluster, else the
    tail of the first missing edge."""
    ctx = _Context(trees.cache.g, trees.sources, c, trees)
    return rp.path.vertices[_phi_index(rp, state, ctx)]


def u_set(q: Sequence[int], state: BuilderState) -> List[int]:
    """Heads of missing edges on ``q``, greedily spaced at least 3 apart along ``q``."""
    out = []
    last = None
    for j in range(1, len(q)):
        if state.g_tau.has_edge(q[j - 1], q[j]):
            continue
        if last is None or j - last >= U_SPACING:
            out.append(q[j])
            last = j
    return out


def valset_8(rp: ReplacementPath, phi_vertex: int, U: Sequence[int], state: BuilderState,
             c: Clustering, trees: SourceTrees, cost: Optional[int] = None):
    ctx = _Context(trees.cache.g, trees.sources, c, trees)
    return _valset(rp, rp.path.vertices.index(phi_vertex), U, state, ctx, cost)


def should_buy(cost: int, value: int) -> bool:
    """Stretch-8 purchase test: the new edges are paid for by the value."""
    return cost <= COST_PER_VALUE * value


def _valset(rp, phi_idx, U, state, ctx: _Context, cost=None) -> Set[Tuple[int, int]]:
    vs = rp.path.vertices
    t, v = rp.t, rp.v
    if cost is None:
        cost = count_missing(vs[phi_idx:], state.g_tau)
    phi_v = vs[phi_idx]
    clusters = ctx.c.clusters
    z2 = ctx.center_of(t, v)
    c2 = clusters[z2]
    view2 = SubgraphView(state.g_tau, ctx.vf(z2))
    z1 = surviving_center(ctx.c, phi_v, v)[0] if phi_v in ctx.c.heavy else None
    out: Set[Tuple[int, int]] = set()
    if cost <= CHEAP_MAX_COST:
        if z1 is None:
            return out
        lhs = len(vs) - 1 - phi_idx
        if lhs < cluster_distance(clusters[z1], c2, view2):
            out.add((z1, z2))
        return out
    # distances from C2 in G_tau minus V_f(C2), shared by every second-half test
    from_c2 = hop_distances(view2, c2)
    pos = {u: i for i, u in enumerate(vs)}
    for u in U:
        zl = ctx.center_of(u, v)
        cl = clusters[zl]
        iu = pos[u]
        if z1 is not None:
            view1 = SubgraphView(state.g_tau, ctx.vf(zl))
            if iu - phi_idx < cluster_distance(clusters[z1], cl, view1):
                out.add((z1, zl))
        rhs2 = min((from_c2[x] for x in cl if x in from_c2), default=INF)
        if len(vs) - 1 - iu < rhs2:
            out.add((zl, z2))
    return out


def _prepare(g: Graph, sources: Sequence[int], w: PerturbedWeights):
    """Steps shared by both builders up to (and including) G_0."""
    S = tuple(sorted(set(sources)))
    if not S:
        raise ValueError("need at least one source")
    c = build_clustering(g, len(S))
    cache = ReplacementCache(g, w)
    trees = SourceTrees(S, cache)
    provenance: Dict[Edge, Set[str]] = {}

    tree_edges = set()
    for s in S:
        tree_edges.update(trees.tree(s).edges())
    tag_edges(provenance, tree_edges, "tree")
    tag_edges(provenance, c.g_delta_edges, "cluster")

    heavy = sorted(c.heavy)
    segs: Dict[Tuple[int, int], Segmentation] = {}
    for s in S:
        tr = trees.tree(s)
        for t in heavy:
            if t != s and t in tr:
                segs[(s, t)] = segment(s, t, c, trees)

    loc: Dict[int, FrozenSet[Edge]] = {t: local_edges(S, t, c, trees) for t in heavy}
    all_local = set().union(*loc.values()) if loc else set()
    tag_edges(provenance, all_local, "local")

    baseline = tree_edges | c.g_delta_edges | all_local
    dep_edges = set()
    independent: List[ReplacementPath] = []
    n_new = 0
    for (s, t), seg in sorted(segs.items()):
        for v in sorted(seg.far):
            if v == s:
                continue
            e = cache.last_edge(s, t, v)
            if e is None or e in baseline:
                continue
            n_new += 1
            rec = classify_far(cache.get(s, t, v), seg, trees, baseline)
            if rec.dependent:
                dep_edges.add(rec.rp.last_edge)
            else:
                independent.append(rec.rp)
    tag_edges(provenance, dep_edges, "dep")

    g0 = baseline | dep_edges
    ctx = _Context(g, S, c, trees)
    state = BuilderState(EdgeSubgraph(g, g0))
    layer = Layer(name="sourcewise", clustering=c, sources=S, local_edges=loc,
                  pair_counts=state.pair_counts, buy_log=state.buy_log,
                  stats={"g0": len(g0), "new_ending_far": n_new,
                         "dependent_edges": len(dep_edges), "independent": len(independent)})
    independent.sort(key=lambda rp: (rp.s, rp.t, rp.v))
    return ctx, state, independent, provenance, layer


def _run_h4(ctx: _Context, state: BuilderState, paths, provenance):
    for rp in paths:
        fires, i, zx, zt = _buy4_decision(rp, state, ctx)
        vs = rp.path.vertices
        cost = count_missing(vs, state.g_tau)
        pairs = ((zx, zt),) if fires else ()
        if fires:
            for a, b in zip(vs, vs[1:]):
                if state.g_tau.add_edge(a, b):
                    provenance.setdefault(edge(a, b), set()).add("bought")
            state.pair_counts[(zx, zt)] += 1
        state.buy_log.append(BuyRecord(rp.s, rp.t, rp.v, cost, int(fires), fires, "h4", pairs))


def _run_h8(ctx: _Context, state: BuilderState, paths, provenance):
    for rp in paths:
        vs = rp.path.vertices
        k = _phi_index(rp, state, ctx)
        q = vs[k:]
        cost = count_missing(q, state.g_tau)
        U = u_set(q, state) if cost > CHEAP_MAX_COST else []
        vals = _valset(rp, k, U, state, ctx, cost)
        bought = should_buy(cost, len(vals))
        if bought:
            for a, b in zip(q, q[1:]):
                if state.g_tau.add_edge(a, b):
                    provenance.setdefault(edge(a, b), set()).add("bought")
            for pair in vals:
                state.pair_counts[pair] += 1
        state.buy_log.append(BuyRecord(rp.s, rp.t, rp.v, cost, len(vals), bought, "h8",
                                       tuple(sorted(vals))))


def _finish(kind, beta, g, S, w, seed, ctx, state, provenance, layer) -> Spanner:
    edges = tuple(sorted(state.g_tau.edge_set))
    prov = {e: provenance.get(e, set()) for e in edges}
    params = {"kind": kind, "n": g.n, "m": g.m, "seed": seed, "effective_seed": w.seed,
              "delta": ctx.c.delta, "num_centers": len(ctx.c.centers),
              "num_heavy": len(ctx.c.heavy), "num_sources": len(S)}
    return Spanner(kind=kind, beta=beta, edges=edges, provenance=prov, params=params,
                   sources=tuple(sorted(set(S))), weights=w, layers=[layer])


def build_h4_with_weights(g: Graph, sources, w: PerturbedWeights, seed=None) -> Spanner:
    ctx, state, paths, prov, layer = _prepare(g, sources, w)
    _run_h4(ctx, state, paths, prov)
    return _finish("4sw", 4, g, ctx.sources, w, w.seed if seed is None else seed,
                   ctx, state, prov, layer)


def build_h8_with_weights(g: Graph, sources, w: PerturbedWeights, seed=None) -> Spanner:
    ctx, state, paths, prov, layer = _prepare(g, sources, w)
    _run_h8(ctx, state, paths, prov)
    return _finish("8sw", 8, g, ctx.sources, w, w.seed if seed is None else seed,
                   ctx, state, prov, layer)


def build_H4(g: Graph, sources, seed: int = 0) -> Spanner:
    """(4, S) fault-tolerant spanner: whole independent paths bought by cluster-distance gain."""
    return with_tie_retry(g, seed, lambda w: build_h4_with_weights(g, sources, w, seed))


def build_H8(g: Graph, sources, seed: int = 0) -> Spanner:
    """(8, S) fault-tolerant spanner: suffixes bought when Cost <= 4 * Val."""
    return with_tie_retry(g, seed, lambda w: build_h8_with_weights(g, sources, w, seed))
