"""Small named graphs used by the tests, the docs and the CLI smoke runs."""
from __future__ import annotations

from importlib import resources

from .edgelist import parse_edge_list
from .graph import Graph

#: sources that make F1 exercise dependent and independent far paths
F1_SOURCES = (2, 5)
F1_HUB = 4


def f1_text() -> str:
    return resources.files("ftspanner").joinpath("data/f1.txt").read_text(encoding="utf-8")


def f1() -> Graph:
    """Eight vertices around hub 4. With sources {2, 5} and seed 0 the
    fault at 4 gives one independent path (2 -> 6) and one dependent path
    (5 -> 6) whose detour passes through source 2."""
    return parse_edge_list(f1_text())


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
