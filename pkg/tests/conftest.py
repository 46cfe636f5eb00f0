import random

import networkx as nx
import pytest

from ftspanner.generators import from_networkx, gnp, regular
from ftspanner.graph import Graph, PerturbedWeights, edge


def manual_weights(g, values, seed=-1):
    """PerturbedWeights with hand-picked values, e.g. to force a tie."""
    r = {edge(*e): x for e, x in values.items()}
    assert set(r) == set(g.edges)
    by_vertex = tuple({} for _ in range(g.n))
    for (u, v), x in r.items():
        by_vertex[u][v] = x
        by_vertex[v][u] = x
    return PerturbedWeights(seed=seed, r=r, by_vertex=by_vertex)


def micro_graphs(count, seed=0, max_n=12):
    """Seeded connected-or-not small graphs for oracle comparisons."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_n)
        p = rng.uniform(0.15, 0.6)
        G = nx.gnp_random_graph(n, p, seed=rng.randrange(2 ** 31))
        out.append(Graph(n, list(G.edges())))
    return out


def sparse_connected(n, avg_deg, seed):
    rng = random.Random(seed)
    while True:
        G = nx.gnp_random_graph(n, avg_deg / n, seed=rng.randrange(2 ** 31))
        if nx.is_connected(G):
            return from_networkx(G)


@pytest.fixture
def c5():
    return Graph(5, [(i, (i + 1) % 5) for i in range(5)])


@pytest.fixture
def k4():
    return Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def to_nx_dist(g, deleted=()):
    """All-pairs hop distances with ``deleted`` removed, from networkx."""
    G = nx.Graph()
    G.add_nodes_from(v for v in range(g.n) if v not in deleted)
    G.add_edges_from((u, v) for u, v in g.edges if u not in deleted and v not in deleted)
    return {s: nx.single_source_shortest_path_length(G, s) if s in G else {} for s in range(g.n)}


# sparse instances on which the sourcewise builders really buy paths:
# (model, n, average degree or d, seed, sources)
BUYING_CORPUS = [
    ("gnp", 27, 3.2, 80, [8]),
    ("regular", 24, 3, 109, [7, 8]),
    ("gnp", 26, 3.5, 397, [3]),
    ("gnp", 28, 3.0, 587, [22, 24, 25]),
    ("regular", 26, 3, 351, [19]),
    ("regular", 26, 3, 1030, [1, 13, 24]),
    ("gnp", 18, 3.3, 1347, [1, 7, 15]),
    ("gnp", 20, 2.4, 1527, [19]),
    ("gnp", 18, 3.1, 2606, [0, 13, 14]),
    ("gnp", 23, 2.6, 1159, [6]),
    ("regular", 22, 3, 2471, [13]),
    ("gnp", 24, 2.7, 1732, [3, 7]),
]


def corpus_graph(model, n, x, seed):
    return gnp(n, x / n, seed) if model == "gnp" else regular(n, x, seed)
