"""Experiment configs, source selection and the sweep runner."""
from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .edgelist import read_edge_list
from .errors import InfeasibleModel
from .generators import generate
from .graph import Graph
from .spanners import KINDS, SOURCEWISE_KINDS, build, ceil_root
from .verify import check_spanner, check_stretch, size_normalizer

WORKERS_ENV = "FTSPAN_WORKERS"
CSV_COLUMNS = ("kind", "n", "m", "seed", "|H|", "ratio", "verify_pass", "millis")


def select_sources(g: Graph, k: int) -> List[int]:
    """The ``k`` lowest-ranked vertices by (degree, id), returned sorted."""
    if k < 1:
        raise ValueError("need at least one source")
    ranked = sorted(g.vertices(), key=lambda v: (g.degree(v), v))
    return sorted(ranked[:k])


def default_source_count(n: int) -> int:
    return max(1, ceil_root(n, 1, 3))


def worker_count(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


@dataclass
class ExperimentConfig:
    """One (model, params, seed, kind) run."""

    model: str
    n: int = 0
    p: Optional[float] = None
    d: Optional[int] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    path: Optional[str] = None
    seed: int = 0
    kind: str = "2add"
    sources: Optional[List[int]] = None
    k: Optional[int] = None
    beta: Optional[int] = None
    verify: bool = True

    def graph(self) -> Graph:
        if self.model == "file":
            if not self.path:
                raise InfeasibleModel("model 'file' needs a path")
            return read_edge_list(self.path)
        params = {"n": self.n, "p": self.p, "d": self.d, "rows": self.rows, "cols": self.cols}
        return generate(self.model, {k: v for k, v in params.items() if v is not None}, self.seed)

    def pick_sources(self, g: Graph) -> Optional[List[int]]:
        if self.kind not in SOURCEWISE_KINDS:
            return None
        if self.sources:
            return sorted(set(self.sources))
        return select_sources(g, self.k or default_source_count(g.n))


def expand_config(cfg: Dict) -> List[ExperimentConfig]:
    """Cartesian product of ``n`` x ``seeds`` x ``kinds`` from a sweep config.

    ``p`` may be given directly or as ``p_log_factor`` c, meaning
    ``p = c ln n / n``.  ``repeats`` r is shorthand for seeds ``0..r-1``.
    """
    model = cfg.get("model", "gnp")
    ns = cfg.get("n", [])
    ns = ns if isinstance(ns, list) else [ns]
    if "seeds" in cfg:
        seeds = list(cfg["seeds"])
    else:
        seeds = list(range(int(cfg.get("repeats", 1))))
    kinds = cfg.get("kinds", [cfg.get("kind", "2add")])
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown spanner kind {kind!r}")
    out = []
    for kind in kinds:
        for n in ns if ns else [0]:
            p = cfg.get("p")
            if p is None and "p_log_factor" in cfg and n > 1:
                p = min(1.0, float(cfg["p_log_factor"]) * math.log(n) / n)
            side = math.isqrt(n) if model == "grid" and n else None
            for seed in seeds:
                out.append(ExperimentConfig(
                    model=model, n=n, p=p, d=cfg.get("d"),
                    rows=cfg.get("rows", side), cols=cfg.get("cols", side), path=cfg.get("path"),
                    seed=int(seed), kind=kind, sources=cfg.get("sources"), k=cfg.get("k"),
                    beta=cfg.get("beta"), verify=bool(cfg.get("verify", True))))
    return out


def run_instance(cfg: ExperimentConfig) -> Dict[str, object]:
    g = cfg.graph()
    sources = cfg.pick_sources(g)
    t0 = time.perf_counter()
    sp = build(cfg.kind, g, sources, seed=cfg.seed)
    millis = int(round((time.perf_counter() - t0) * 1000))
    passed = ""
    if cfg.verify:
        if cfg.beta is None:
            rep = check_spanner(g, sp)
        else:
            rep = check_stretch(g, sp.edges, cfg.beta, sp.sources)
        passed = "true" if rep.passed else "false"
    den = size_normalizer(cfg.kind, g.n, len(sources or ()))
    return {"kind": cfg.kind, "n": g.n, "m": g.m, "seed": cfg.seed, "|H|": len(sp.edges),
            "ratio": f"{len(sp.edges) / den:.6f}" if den else "0.000000",
            "verify_pass": passed, "millis": millis}


def _row_key(row):
    return (row["kind"], row["n"], row["seed"], row["m"])


def run_sweep(configs: Sequence[ExperimentConfig], workers: Optional[int] = None) -> List[Dict]:
    workers = worker_count() if workers is None else max(1, workers)
    if workers == 1 or len(configs) <= 1:
        rows = [run_instance(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_instance, configs))
    return sorted(rows, key=_row_key)


def write_csv(path, rows: Sequence[Dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        wr.writeheader()
        for row in rows:
            wr.writerow(row)
