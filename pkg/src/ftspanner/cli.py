"""Command line entry point: ``ftspanner {gen,build,verify,sweep}``.

Exit codes: 0 success, 1 verification violation, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import List, Optional

from .edgelist import format_edge_list, read_edge_list, read_sources, write_edge_list
from .errors import FTSpannerError, InfeasibleModel, NotASubgraph, ParseError
from .experiments import expand_config, run_sweep, select_sources, write_csv
from .generators import MODELS, generate
from .spanners import KINDS, SOURCEWISE_KINDS, build
from .verify import check_spanner, check_stretch, check_structural, size_report

log = logging.getLogger("ftspanner")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _structural_summary(rep) -> dict:
    return {"passed": rep.passed, "failures": rep.failures[:20],
            "checks": dict(sorted(rep.checks.items())), "notes": dict(sorted(rep.notes.items()))}


def cmd_gen(args) -> int:
    params = {"n": args.n, "p": args.p, "d": args.d, "rows": args.rows, "cols": args.cols}
    g = generate(args.model, {k: v for k, v in params.items() if v is not None}, args.seed)
    text = format_edge_list(g.n, g.edges)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _sources_for(args, g) -> Optional[List[int]]:
    if args.kind not in SOURCEWISE_KINDS:
        if args.sources or args.k:
            log.warning("kind %s is all-pairs; ignoring the source selection", args.kind)
        return None
    if args.sources:
        return read_sources(args.sources, g.n)
    if args.k:
        return select_sources(g, min(args.k, g.n))
    raise UsageError(f"kind {args.kind} needs --sources FILE or --k K")


def cmd_build(args) -> int:
    g = read_edge_list(args.input)
    sources = _sources_for(args, g)
    t0 = time.perf_counter()
    sp = build(args.kind, g, sources, seed=args.seed)
    elapsed = time.perf_counter() - t0
    write_edge_list(args.out, g.n, sp.edges)

    report = {
        "kind": sp.kind,
        "beta": sp.beta,
        "params": dict(sorted(sp.params.items())),
        "sources": list(sp.sources) if sp.sources is not None else None,
        "size": size_report(sp, g),
        "stretch": None,
        "structural": None,
    }
    code = EXIT_OK
    if not args.no_verify:
        stretch = check_spanner(g, sp)
        structural = check_structural(g, sp)
        report["stretch"] = stretch.summary()
        report["structural"] = _structural_summary(structural)
        if not (stretch.passed and structural.passed):
            code = EXIT_VIOLATION
    if args.timing:
        report["wall_time_ms"] = int(round(elapsed * 1000))
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dump_json(report))
    status = "skipped" if args.no_verify else ("pass" if code == EXIT_OK else "FAIL")
    print(f"{sp.kind}: n={g.n} m={g.m} |H|={len(sp.edges)} verify={status}")
    return code


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    h = read_edge_list(args.spanner)
    if h.n != g.n:
        raise NotASubgraph(f"spanner has {h.n} vertices, graph has {g.n}")
    sources = read_sources(args.sources, g.n) if args.sources else None
    rep = check_stretch(g, h.edges, args.beta, sources)
    sys.stdout.write(_dump_json(rep.summary()))
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad sweep config: {exc.msg}", exc.lineno) from None
    configs = expand_config(cfg)
    rows = run_sweep(configs)
    write_csv(args.out, rows)
    failed = sum(1 for r in rows if r["verify_pass"] == "false")
    print(f"sweep: {len(rows)} rows written to {args.out}, {failed} verification failures")
    return EXIT_VIOLATION if failed else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ftspanner",
                                 description="Fault-tolerant additive spanners: build, verify, sweep.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    gp = sub.add_parser("gen", help="generate a graph as an edge list")
    gp.add_argument("--model", choices=MODELS, required=True)
    gp.add_argument("--n", type=int)
    gp.add_argument("--p", type=float)
    gp.add_argument("--d", type=int)
    gp.add_argument("--rows", type=int)
    gp.add_argument("--cols", type=int)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--out", help="output file (default: stdout)")
    gp.set_defaults(func=cmd_gen)

    bp = sub.add_parser("build", help="build a spanner from an edge list")
    bp.add_argument("--kind", choices=KINDS, required=True)
    bp.add_argument("--input", required=True)
    src = bp.add_mutually_exclusive_group()
    src.add_argument("--sources", help="file of source vertex ids")
    src.add_argument("--k", type=int, help="pick K sources by degree rank")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--out", required=True)
    bp.add_argument("--report", help="write a JSON report here")
    bp.add_argument("--timing", action="store_true",
                    help="add wall time to the report (makes it run-dependent)")
    bp.add_argument("--no-verify", action="store_true", help="skip the exhaustive checks")
    bp.set_defaults(func=cmd_build)

    vp = sub.add_parser("verify", help="check a spanner's stretch exhaustively")
    vp.add_argument("--graph", required=True)
    vp.add_argument("--spanner", required=True)
    vp.add_argument("--beta", type=int, required=True)
    vp.add_argument("--sources")
    vp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="run a JSON-configured experiment grid")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, NotASubgraph, InfeasibleModel, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FTSpannerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
