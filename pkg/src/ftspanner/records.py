"""Build outputs shared by the builders, the verifier and the workbench."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Tuple, TypeVar

from .clustering import Clustering
from .errors import PerturbationTie
from .graph import Edge, Graph, PerturbedWeights, assign_perturbation

TAGS = ("tree", "cluster", "local", "dep", "bought", "ftmbfs")

MAX_SEED_RETRIES = 16


@dataclass(frozen=True)
class BuyRecord:
    """One path-buying decision. ``pairs`` are ordered (center, center) pairs."""

    s: int
    t: int
    v: int
    cost: int
    value: int
    bought: bool
    rule: str
    pairs: Tuple[Tuple[int, int], ...] = ()

    @property
    def path_id(self) -> Tuple[int, int, int]:
        return (self.s, self.t, self.v)


@dataclass
class Layer:
    """Artifacts of one clustering phase, kept for the structural checks."""

    name: str
    clustering: Clustering
    sources: Tuple[int, ...]
    local_edges: Dict[int, FrozenSet[Edge]] = field(default_factory=dict)
    pair_counts: Counter = field(default_factory=Counter)
    buy_log: List[BuyRecord] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)


@dataclass
class Spanner:
    kind: str
    beta: int
    edges: Tuple[Edge, ...]
    provenance: Dict[Edge, Set[str]]
    params: Dict[str, object]
    sources: Optional[Tuple[int, ...]]
    weights: PerturbedWeights
    layers: List[Layer] = field(default_factory=list)

    @property
    def buy_log(self) -> List[BuyRecord]:
        return [r for layer in self.layers for r in layer.buy_log]

    def tag_counts(self) -> Dict[str, int]:
        counts = {tag: 0 for tag in TAGS}
        for tags in self.provenance.values():
            for tag in tags:
                counts[tag] += 1
        return counts

    def __len__(self):
        return len(self.edges)


def tag_edges(provenance: Dict[Edge, Set[str]], edges, tag: str) -> None:
    for e in edges:
        provenance.setdefault(e, set()).add(tag)


T = TypeVar("T")


def with_tie_retry(g: Graph, seed: int, fn: Callable[[PerturbedWeights], T]) -> T:
    """Run ``fn`` under the perturbation for ``seed``, moving to ``seed + 1``
    whenever a shortest-path tie is detected."""
    last = None
    for k in range(MAX_SEED_RETRIES):
        w = assign_perturbation(g, seed + k)
        try:
            return fn(w)
        except PerturbationTie as exc:
            last = exc
    raise last
