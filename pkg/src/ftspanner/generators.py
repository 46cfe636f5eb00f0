"""Seeded graph generators for experiments (thin wrappers over networkx)."""
from __future__ import annotations

import logging
import random

import networkx as nx

from .errors import InfeasibleModel
from .graph import Graph

log = logging.getLogger(__name__)

MODELS = ("gnp", "regular", "grid")
MAX_CONNECT_RETRIES = 100


def from_networkx(G: nx.Graph) -> Graph:
    """Relabel to 0..n-1 following the sorted node order."""
    ids = {u: i for i, u in enumerate(sorted(G.nodes()))}
    return Graph(len(ids), [(ids[a], ids[b]) for a, b in G.edges()])


def gnp(n: int, p: float, seed: int) -> Graph:
    """Connected G(n, p): up to 100 redraws, then the largest component."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise InfeasibleModel(f"gnp needs n >= 0 and 0 <= p <= 1, got n={n}, p={p}")
    if n <= 1:
        return Graph(n, [])
    rng = random.Random(seed)
    G = None
    for _ in range(MAX_CONNECT_RETRIES):
        G = nx.gnp_random_graph(n, p, seed=rng)
        if nx.is_connected(G):
            return from_networkx(G)
    comp = max(nx.connected_components(G), key=lambda c: (len(c), -min(c)))
    log.warning("G(%d, %g) stayed disconnected after %d draws; keeping largest component (%d vertices)",
                n, p, MAX_CONNECT_RETRIES, len(comp))
    return from_networkx(G.subgraph(comp))


def regular(n: int, d: int, seed: int) -> Graph:
    if d < 0 or d >= max(n, 1) or (n * d) % 2:
        raise InfeasibleModel(f"no {d}-regular graph on {n} vertices")
    return from_networkx(nx.random_regular_graph(d, n, seed=seed))


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise InfeasibleModel(f"grid needs positive dimensions, got {rows}x{cols}")
    G = nx.grid_2d_graph(rows, cols)
    return Graph(rows * cols, [(r1 * cols + c1, r2 * cols + c2) for (r1, c1), (r2, c2) in G.edges()])


def generate(model: str, params: dict, seed: int = 0) -> Graph:
    """Dispatch on ``model``; ``params`` holds n/p, n/d or rows/cols."""
    try:
        if model == "gnp":
            return gnp(int(params["n"]), float(params["p"]), seed)
        if model == "regular":
            return regular(int(params["n"]), int(params["d"]), seed)
        if model == "grid":
            return grid(int(params["rows"]), int(params["cols"]))
    except KeyError as exc:
        raise InfeasibleModel(f"model {model!r} is missing parameter {exc.args[0]!r}") from None
    raise InfeasibleModel(f"unknown model {model!r}")
