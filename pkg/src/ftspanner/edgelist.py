"""Plain-text edge lists.

Format: a header line ``n m`` followed by ``m`` lines ``u v`` with
``0 <= u < v < n``.  Text after ``#`` is ignored, as are blank lines.  The
writer emits edges sorted, so reading and writing again is byte-identical.
"""
from __future__ import annotations

import os
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import ParseError
from .graph import Edge, Graph, edge

PathLike = Union[str, "os.PathLike[str]"]


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def _ints(tok: Sequence[str], lineno: int) -> List[int]:
    try:
        return [int(x) for x in tok]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tok)!r}", lineno) from None


def parse_edge_list(text: str) -> Graph:
    rows = _tokens(text)
    try:
        lineno, head = next(rows)
    except StopIteration:
        raise ParseError("missing 'n m' header", 1) from None
    if len(head) != 2:
        raise ParseError("header must be 'n m'", lineno)
    n, m = _ints(head, lineno)
    if n < 0 or m < 0:
        raise ParseError("negative count in header", lineno)
    seen = set()
    edges: List[Edge] = []
    last = lineno
    for lineno, tok in rows:
        last = lineno
        if len(tok) != 2:
            raise ParseError("edge line must be 'u v'", lineno)
        u, v = _ints(tok, lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex id out of range 0..{n - 1} in edge ({u}, {v})", lineno)
        e = edge(u, v)
        if e in seen:
            raise ParseError(f"duplicate edge {e}", lineno)
        seen.add(e)
        edges.append(e)
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", last)
    return Graph(n, edges)


def format_edge_list(n: int, edges: Iterable[Tuple[int, int]]) -> str:
    es = sorted(edge(u, v) for u, v in edges)
    lines = [f"{n} {len(es)}"] + [f"{u} {v}" for u, v in es]
    return "\n".join(lines) + "\n"


def read_edge_list(path: PathLike) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(path: PathLike, g_or_n, edges=None) -> None:
    """``write_edge_list(path, g)`` or ``write_edge_list(path, n, edges)``."""
    if isinstance(g_or_n, Graph):
        n, edges = g_or_n.n, g_or_n.edges
    else:
        n = g_or_n
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(n, edges))


def parse_sources(text: str, n: int) -> List[int]:
    """Whitespace-separated vertex ids, ``#`` comments allowed."""
    out = []
    for lineno, tok in _tokens(text):
        for v in _ints(tok, lineno):
            if not 0 <= v < n:
                raise ParseError(f"source {v} out of range 0..{n - 1}", lineno)
            out.append(v)
    if not out:
        raise ParseError("source file lists no vertices")
    return sorted(set(out))


def read_sources(path: PathLike, n: int) -> List[int]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sources(fh.read(), n)
