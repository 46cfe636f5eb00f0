import itertools
import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from ftspanner import sourcewise as sw
from ftspanner.clustering import Clustering, build_clustering
from ftspanner.errors import ClusteringViolation
from ftspanner.fixtures import F1_SOURCES, cycle, f1, path_graph
from ftspanner.generators import from_networkx, gnp, regular
from ftspanner.graph import EdgeSubgraph, Graph, Path, SubgraphView, assign_perturbation
from ftspanner.replacement import ReplacementCache, make_replacement
from ftspanner.verify import check_stretch, check_structural

from conftest import BUYING_CORPUS, corpus_graph
from oracles import brute_lca, brute_stretch_ok, brute_tree_path, cluster_dist, to_nx


def f1_setup(seed=0):
    g = f1()
    S = list(F1_SOURCES)
    w = assign_perturbation(g, seed)
    c = build_clustering(g, len(S))
    trees = sw.SourceTrees(S, ReplacementCache(g, w))
    return g, S, w, c, trees


# ---------------------------------------------------------------- segmentation

def test_segment_trivial_cases():
    g, S, w, c, trees = f1_setup()
    seg = sw.segment(2, 0, c, trees)  # 0 is adjacent to source 2, whose cluster holds 2
    assert seg.ell == 2 and seg.far == frozenset()
    seg = sw.segment(2, 4, c, trees)  # the LCA is 4's parent
    assert seg.ell == trees.tree(2).parent[4] and seg.near == {4}


def test_segment_matches_brute_force_lca_on_f1():
    g, S, w, c, trees = f1_setup()
    for s in S:
        for t in sorted(c.heavy - {s}):
            members = c.clusters[c.z1[t]]
            ell = brute_lca(g, s, members, w)
            pi = brute_tree_path(g, s, t, w)
            seg = sw.segment(s, t, c, trees)
            i = pi.index(ell)
            assert seg.ell == ell
            assert seg.far == set(pi[:i]) and seg.near == set(pi[i + 1:])
            assert seg.far | {ell} | seg.near == set(pi) and not seg.far & seg.near
    # the one pair with a nonempty far segment
    assert sw.segment(2, 6, c, trees).far_order == (2, 4)


def test_segment_cluster_unreachable():
    g = Graph(7, [(0, 1), (2, 3), (2, 4), (3, 4), (4, 5), (3, 6), (5, 6)])
    c = build_clustering(g, 2)
    trees = sw.SourceTrees([0], ReplacementCache(g, assign_perturbation(g, 0)))
    t = min(c.heavy)
    with pytest.raises(sw.ClusterUnreachable):
        sw.segment(0, t, c, trees)


# ---------------------------------------------------------------- local edges

def brute_local(g, S, t, c, w):
    out = set()
    for s in S:
        if s == t or brute_tree_path(g, s, t, w) is None:
            continue
        ell = brute_lca(g, s, c.clusters[c.z1[t]], w)
        for v in {c.z1[t], ell} - {s, t}:
            base = brute_tree_path(g, s, t, w)
            p = base if v not in base else brute_tree_path(g, s, t, w, (v,))
            if p is not None:
                out.add(tuple(sorted(p[-2:])))
    return out


def test_local_edges_f1_and_bound():
    g, S, w, c, trees = f1_setup()
    for t in sorted(c.heavy):
        loc = sw.local_edges(S, t, c, trees)
        assert loc == brute_local(g, S, t, c, w)
        assert len(loc) <= 2 * len(S)
    for s in S:
        for t in sorted(c.heavy - {s}):
            assert len(sw.local_edges([s], t, c, trees)) <= 2


def test_local_fault_skips_endpoints():
    g, S, w, c, trees = f1_setup()
    for s in S:
        for t in sorted(c.heavy - {s}):
            assert not {s, t} & set(sw.local_fault_candidates(s, t, c, trees))


# ---------------------------------------------------------------- classification

def test_classify_far_on_f1():
    g, S, w, c, trees = f1_setup()
    cache = trees.cache
    t0 = set().union(*(trees.tree(s).edges() for s in S))
    baseline = t0 | c.g_delta_edges | set().union(*(sw.local_edges(S, t, c, trees) for t in c.heavy))
    ind = sw.classify_far(cache.get(2, 6, 4), sw.segment(2, 6, c, trees), trees, baseline)
    dep = sw.classify_far(cache.get(5, 6, 4), sw.segment(5, 6, c, trees), trees, baseline)
    assert ind.kind == "independent" and not ind.dependent
    assert dep.kind == "dependent"
    # explicit intersection test: the detour of 5 -> 6 runs through source 2,
    # which lies on pi(2, 6) inside T(6, S)
    t_of_6 = set(trees.pi(2, 6).vertices) | set(trees.pi(5, 6).vertices)
    assert set(cache.get(5, 6, 4).detour_plus) & t_of_6 == {2, 6}
    assert set(cache.get(2, 6, 4).detour_plus) & t_of_6 == {6}
    # last edge inside the tree -> not a candidate
    rp = cache.get(2, 7, 4)
    assert sw.classify_far(rp, sw.segment(2, 6, c, trees), trees, baseline | {rp.last_edge}) is None
    # fault outside the far segment -> not a candidate
    assert sw.classify_far(cache.get(2, 6, 0), sw.segment(2, 6, c, trees), trees, set()) is None


def test_single_source_detour_is_independent():
    g, S, w, c, trees1 = f1_setup()
    trees = sw.SourceTrees([2], trees1.cache)
    rp = trees.cache.get(2, 6, 4)
    assert set(rp.detour_plus) & set(trees.pi(2, 6).vertices) == {6}
    rec = sw.classify_far(rp, sw.segment(2, 6, c, trees), trees, set(trees.tree(2).edges()))
    assert rec.kind == "independent"


# ---------------------------------------------------------------- forbidden sets

def test_forbidden_vertices_f1():
    g, S, w, c, trees = f1_setup()
    # C_3 = {3, 6}: LCA is 6 for both sources; pi(2,6) = 2,4,6 and pi(5,6) = 5,4,6
    assert c.clusters[3] == {3, 6}
    assert sw.forbidden_vertices(c.clusters[3], S, trees) == {2, 4, 5}
    # a cluster holding the source contributes nothing from that source
    assert 2 in c.clusters[0]
    assert sw.forbidden_vertices(c.clusters[0], [2], trees) == frozenset()
    for z, members in c.clusters.items():
        expect = set()
        for s in S:
            ell = brute_lca(g, s, members, w)
            expect |= set(brute_tree_path(g, s, ell, w))
        assert sw.forbidden_vertices(members, S, trees) == expect - members


def test_forbidden_vertices_monotone_in_sources():
    g = gnp(30, 0.15, 3)
    w = assign_perturbation(g, 0)
    cache = ReplacementCache(g, w)
    c = build_clustering(g, 3)
    order = random.Random(1).sample(range(g.n), 6)
    for z, members in c.clusters.items():
        prev = frozenset()
        for k in range(1, len(order) + 1):
            cur = sw.forbidden_vertices(members, order[:k], sw.SourceTrees(order[:k], cache))
            assert prev <= cur
            prev = cur


# ---------------------------------------------------------------- cluster distance

def test_cluster_distance_cases():
    g = path_graph(8)
    view = SubgraphView(g)
    assert sw.cluster_distance({1, 2}, {2, 5}, view) == 0
    assert sw.cluster_distance({1, 2}, {5, 6}, SubgraphView(g, frozenset({1, 2}))) == math.inf
    assert sw.cluster_distance({0, 1}, {4, 7}, view) == 3
    # overlap present but the shared vertex is deleted
    assert sw.cluster_distance({1, 2}, {2, 5}, SubgraphView(g, frozenset({2}))) == math.inf


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cluster_distance_matches_bfs_oracle(seed):
    rng = random.Random(seed)
    g = gnp(15, 0.2, seed)
    deleted = frozenset(rng.sample(range(g.n), 3))
    ca = set(rng.sample(range(g.n), 3))
    cb = set(rng.sample(range(g.n), 3))
    G = to_nx(g, deleted=deleted)
    assert sw.cluster_distance(ca, cb, SubgraphView(g, deleted)) == cluster_dist(G, ca, cb)


# ---------------------------------------------------------------- stretch-4 rule

def rule4_fixture():
    """Candidate path 0-1-2-3-4 for fault 9 on pi(0,4) = 0,9,4.
    Cluster of 1 is {1,5} (also {1,7}), cluster of 4 is {4,6} (also {4,8});
    5-7-8-6 and 1-7-8-4 are the competing 3-hop routes."""
    es = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 9), (4, 9), (1, 5), (4, 6),
          (5, 7), (7, 8), (6, 8), (1, 7), (4, 8)]
    g = Graph(10, es)
    c = Clustering(delta=2, heavy=frozenset({1, 4}), centers=frozenset({5, 6, 7, 8}),
                   z1={1: 5, 4: 6}, z2={1: 7, 4: 8},
                   clusters={5: frozenset({5, 1}), 6: frozenset({6, 4}),
                             7: frozenset({7, 1}), 8: frozenset({8, 4})},
                   g_delta_edges=frozenset())
    w = assign_perturbation(g, 0)
    trees = sw.SourceTrees([0], ReplacementCache(g, w))
    assert trees.pi(0, 4).vertices == (0, 9, 4)
    rp = make_replacement(0, 4, 9, Path((0, 1, 2, 3, 4)), trees.pi(0, 4))
    return g, c, trees, rp


def test_rule4_strict_inequality():
    g, c, trees, rp = rule4_fixture()
    assert sw.forbidden_vertices(c.clusters[6], [0], trees) == {0, 9}
    state = sw.BuilderState(EdgeSubgraph(g, set(g.edges) - {(1, 2)}))
    # x = 1, dist(1, 4, P) = 3 and the clusters are 3 apart: 3 < 3 fails
    assert not sw.buy_rule_4(rp, state, c, [0], trees)
    state = sw.BuilderState(EdgeSubgraph(g, set(g.edges) - {(1, 2), (7, 8)}))
    # with 7-8 gone the clusters are disconnected: RHS is inf
    assert sw.buy_rule_4(rp, state, c, [0], trees)
    state = sw.BuilderState(EdgeSubgraph(g, g.edges))
    assert not sw.buy_rule_4(rp, state, c, [0], trees)


def test_rule4_light_endpoint_is_a_violation():
    g, c, trees, rp = rule4_fixture()
    state = sw.BuilderState(EdgeSubgraph(g, set(g.edges) - {(0, 1)}))
    with pytest.raises(ClusteringViolation):
        sw.buy_rule_4(rp, state, c, [0], trees)


# ---------------------------------------------------------------- phi

def phi_oracle(g, rp, g_tau, c, w):
    """Exhaustive backward scan of the pivot definition."""
    vs = rp.path.vertices
    s, v = rp.s, rp.v
    for i in range(len(vs) - 1, 0, -1):
        if tuple(sorted(vs[i - 1:i + 1])) in g_tau:
            continue
        u = vs[i]
        if u not in c.heavy or u == v:
            continue
        z = c.z1[u] if c.z1[u] != v else c.z2[u]
        ell = brute_lca(g, s, c.clusters[z], w)
        pi = brute_tree_path(g, s, u, w)
        if v in pi and pi.index(v) > pi.index(ell):
            return u
    for i in range(len(vs) - 1):
        if tuple(sorted(vs[i:i + 2])) not in g_tau:
            return vs[i]
    return vs[-1]


def test_phi_on_f1_all_states():
    g, S, w, c, trees = f1_setup()
    rp = trees.cache.get(2, 6, 4)
    assert rp.path.vertices == (2, 1, 7, 6)
    path_edges = rp.path.edges()
    for k in range(len(path_edges) + 1):
        for missing in itertools.combinations(path_edges, k):
            g_tau = set(g.edges) - set(missing)
            state = sw.BuilderState(EdgeSubgraph(g, g_tau))
            assert sw.phi(rp, state, c, trees) == phi_oracle(g, rp, g_tau, c, w)


def test_phi_hand_cases_f1():
    g, S, w, c, trees = f1_setup()
    rp = trees.cache.get(2, 6, 4)

    def phi_missing(*missing):
        return sw.phi(rp, sw.BuilderState(EdgeSubgraph(g, set(g.edges) - set(missing))), c, trees)

    # only (1,7) missing: 7 enters by a missing edge, its cluster C_0 has LCA 2
    # in T0(2) and the fault 4 sits below 2 on pi(2,7) = 2,4,7
    assert phi_missing((1, 7)) == 7
    # only (1,2) missing: pi(2,1) avoids 4, so N2 fails and the fallback is 2
    assert phi_missing((1, 2)) == 2
    # nothing missing: fallback is t and Q is empty
    assert phi_missing() == 6


# ---------------------------------------------------------------- U and ValSet

def test_u_set_contiguous():
    g = path_graph(8)
    state = sw.BuilderState(EdgeSubgraph(g))
    assert sw.u_set(list(range(8)), state) == [1, 4, 7]


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(1, 12), min_size=5))
def test_u_set_greedy_spacing(heads):
    g = path_graph(13)
    present = [(j - 1, j) for j in range(1, 13) if j not in heads]
    state = sw.BuilderState(EdgeSubgraph(g, present))
    U = sw.u_set(list(range(13)), state)
    assert all(u in heads for u in U)
    assert all(b - a >= 3 for a, b in zip(U, U[1:]))
    assert len(U) >= math.ceil(len(heads) / 3)
    # greedy simulation
    kept, last = [], None
    for j in sorted(heads):
        if last is None or j - last >= 3:
            kept.append(j)
            last = j
    assert U == kept


COSTLY_CENTERS = {1: (8, 9), 2: (8, 9), 3: (9, 10), 4: (9, 10), 5: (10, 11), 6: (10, 11), 7: (10, 11)}


def costly_fixture():
    """Path 0..7 of heavy vertices (except 0), centers 8..11, source 0 and an
    off-path fault 12 on the short route 0-12-7."""
    es = [(i, i + 1) for i in range(7)] + [(0, 12), (7, 12)]
    es += [(u, z) for u, zs in COSTLY_CENTERS.items() for z in zs]
    g = Graph(13, es)
    members = {z: {z} for z in (8, 9, 10, 11)}
    for u, zs in COSTLY_CENTERS.items():
        for z in zs:
            members[z].add(u)
    c = Clustering(delta=2, heavy=frozenset(COSTLY_CENTERS), centers=frozenset(members),
                   z1={u: zs[0] for u, zs in COSTLY_CENTERS.items()},
                   z2={u: zs[1] for u, zs in COSTLY_CENTERS.items()},
                   clusters={z: frozenset(m) for z, m in members.items()},
                   g_delta_edges=frozenset())
    w = assign_perturbation(g, 0)
    trees = sw.SourceTrees([0], ReplacementCache(g, w))
    rp = make_replacement(0, 7, 12, Path(tuple(range(8))), trees.pi(0, 7))
    return g, c, trees, rp


def valset_oracle(g, rp, phi_idx, U, g_tau, c, trees):
    vs = rp.path.vertices
    t, v = rp.t, rp.v
    q = vs[phi_idx:]
    cost = sum(1 for a, b in zip(q, q[1:]) if tuple(sorted((a, b))) not in g_tau)

    def zof(u):
        return c.z1[u] if c.z1[u] != v else c.z2[u]

    def dist(za, zb):
        vf = sw.forbidden_vertices(c.clusters[zb], trees.sources, trees)
        return cluster_dist(to_nx(g, g_tau, vf), c.clusters[za], c.clusters[zb])

    z2 = zof(t)
    z1 = zof(vs[phi_idx]) if vs[phi_idx] in c.heavy else None
    out = set()
    if cost <= 4:
        if z1 is not None and len(vs) - 1 - phi_idx < dist(z1, z2):
            out.add((z1, z2))
        return out
    for u in U:
        zl, iu = zof(u), vs.index(u)
        if z1 is not None and iu - phi_idx < dist(z1, zl):
            out.add((z1, zl))
        if len(vs) - 1 - iu < dist(zl, z2):
            out.add((zl, z2))
    return out


def test_valset_hand_cases():
    g, c, trees, rp = costly_fixture()
    q = list(range(1, 8))

    def run(g_tau):
        state = sw.BuilderState(EdgeSubgraph(g, g_tau))
        U = sw.u_set(q, state)
        return U, sw.count_missing(q, state.g_tau), sw.valset_8(rp, 1, U, state, c, trees)

    # cheap (3 missing), clusters of 1 and 7 disconnected: RHS is inf
    U, cost, vals = run([(4, 5), (5, 6), (6, 7)])
    assert cost == 3 and vals == {(8, 10)}
    # costly, everything present except the path: every inequality fails
    path_edges = {(i, i + 1) for i in range(7)}
    U, cost, vals = run(set(g.edges) - path_edges)
    assert cost == 6 and U == [2, 5] and vals == set()
    assert not sw.should_buy(cost, len(vals))
    # costly with an empty G_tau: U = u1, u4; only (C8, C10) improves, Val = 1 < 6/4
    U, cost, vals = run([])
    assert U == [2, 5] and vals == {(8, 10)} and not sw.should_buy(cost, 1)


def test_valset_matches_bfs_oracle_random_states():
    g, c, trees, rp = costly_fixture()
    rng = random.Random(4)
    costly = 0
    for _ in range(150):
        g_tau = {e for e in g.edges if rng.random() < (0.3 if e[1] == e[0] + 1 and e[1] < 8 else 0.6)}
        state = sw.BuilderState(EdgeSubgraph(g, g_tau))
        for phi_idx in (0, 1, 2):
            q = list(range(phi_idx, 8))
            U = sw.u_set(q, state) if sw.count_missing(q, state.g_tau) > 4 else []
            costly += bool(U)
            got = sw.valset_8(rp, phi_idx, U, state, c, trees)
            assert got == valset_oracle(g, rp, phi_idx, U, g_tau, c, trees)
    assert costly > 20


def test_cost_value_rule():
    assert sw.should_buy(0, 0)
    assert sw.should_buy(5, 2)
    assert sw.should_buy(8, 2) and not sw.should_buy(9, 2)
    assert not sw.should_buy(5, 0)


# ---------------------------------------------------------------- whole builds

def test_tree_input_is_kept_whole():
    g = from_networkx(nx.random_labeled_tree(20, seed=2))
    for build in (sw.build_H4, sw.build_H8):
        sp = build(g, [0, 5, 9], 0)
        assert set(sp.edges) == g.edge_set
        assert not sp.buy_log


def test_c5_single_source():
    g = cycle(5)
    for build, beta in ((sw.build_H4, 4), (sw.build_H8, 8)):
        sp = build(g, [0], 0)
        assert set(sp.edges) == g.edge_set
        assert check_stretch(g, sp.edges, beta, [0]).passed


@pytest.mark.parametrize("build,beta", [(sw.build_H4, 4), (sw.build_H8, 8)])
def test_f1_exhaustive(build, beta):
    g = f1()
    sp = build(g, F1_SOURCES, 0)
    assert brute_stretch_ok(g, sp.edges, beta, F1_SOURCES) == []
    assert check_structural(g, sp).passed
    layer = sp.layers[0]
    assert layer.stats["dependent_edges"] == 1 and layer.stats["independent"] == 1
    assert sp.provenance[(6, 7)] >= {"dep"}


def test_f1_h8_zero_cost_buy_is_a_noop():
    g = f1()
    sp = sw.build_H8(g, F1_SOURCES, 0)
    (rec,) = sp.buy_log
    assert (rec.s, rec.t, rec.v, rec.cost, rec.bought) == (2, 6, 4, 0, True)
    assert len(sp.edges) == sp.layers[0].stats["g0"]
    assert sp.tag_counts()["bought"] == 0


# instances found by scanning sparse random graphs for independent far paths
# that actually get bought: (model, n, c or d, seed, sources)
@pytest.mark.parametrize("model,n,x,seed,S", BUYING_CORPUS)
def test_path_buying_corpus(model, n, x, seed, S):
    g = corpus_graph(model, n, x, seed)
    for build, beta in ((sw.build_H4, 4), (sw.build_H8, 8)):
        sp = build(g, S, 0)
        layer = sp.layers[0]
        assert layer.stats["independent"] >= 1
        assert any(r.bought and r.cost > 0 for r in sp.buy_log)
        assert sp.tag_counts()["bought"] > 0
        assert brute_stretch_ok(g, sp.edges, beta, S) == []
        rep = check_structural(g, sp)
        assert rep.passed, rep.failures
        # G0 is contained in H and T0(S) keeps fault-free distances exact
        w = sp.weights
        cache = ReplacementCache(g, w)
        for s in S:
            assert set(cache.tree(s).edges()) <= set(sp.edges)
        assert len(sp.edges) >= layer.stats["g0"]
        for r in sp.buy_log:
            if beta == 8 and r.bought:
                assert r.cost <= 4 * r.value


def test_builds_are_reproducible():
    g = corpus_graph("gnp", 26, 3.5, 397)
    for build in (sw.build_H4, sw.build_H8):
        a, b = build(g, [3], 0), build(g, [3], 0)
        assert a.edges == b.edges and a.buy_log == b.buy_log
        assert dict(a.layers[0].pair_counts) == dict(b.layers[0].pair_counts)


def test_independent_paths_in_sorted_order():
    g = corpus_graph("gnp", 18, 3.3, 1347)
    sp = sw.build_H8(g, [1, 7, 15], 0)
    ids = [r.path_id for r in sp.buy_log]
    assert ids == sorted(ids) and len(ids) == sp.layers[0].stats["independent"]


def test_need_sources(c5):
    with pytest.raises(ValueError):
        sw.build_H4(c5, [], 0)
