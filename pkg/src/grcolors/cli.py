"""Command-line driver: construct, verify, bounds, exact, stats.

Every run can emit a manifest (JSON) describing the exact invocation;
replaying a manifest reproduces the output files byte for byte.  All
randomness flows from --seed.  Exit codes: 0 success or valid, 1 a
violation or invalid input coloring, 2 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .bounds import bounds_report
from .checking import CheckSpec, check, leftover_stats
from .coloring import Coloring, load_coloring, save_coloring
from .copies import CopyKind, count_copies
from .exact import ExactProblem, min_colors
from .finishing import FinishConfig, NotFinished, finish
from .hosts import HostSpec, Mode
from .packing import PackConfig, pack_bipartite, pack_complete, pack_hyper
from .path_colorings import color_p6, color_p7, color_p8_proper

_KIND_PARAM_FLAGS = {"cycle": "m", "path": "t", "clique": "p", "tight": "ell"}


def _kind_from_args(args) -> CopyKind:
    flag = _KIND_PARAM_FLAGS[args.kind]
    value = args.ell_param if flag == "ell" else getattr(args, flag)
    if value is None:
        raise SystemExit(f"--{flag} is required for kind {args.kind}")
    return CopyKind(args.kind, value)


def _add_kind_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", required=True, choices=sorted(_KIND_PARAM_FLAGS))
    p.add_argument("--m", type=int, help="cycle length")
    p.add_argument("--t", type=int, help="path vertex count")
    p.add_argument("--p", type=int, help="clique vertex count")
    p.add_argument("--ell", dest="ell_param", type=int, help="tight cycle vertex count")


def _write_manifest(path, subcommand, argv, outputs, summary, started) -> None:
    doc = {
        "subcommand": subcommand,
        "argv": list(argv),
        "version": __version__,
        "outputs": outputs,
        "wall_clock_s": round(time.monotonic() - started, 3),
        "summary": summary,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _csv_value(v) -> str:
    return str(v)


def _emit_csv(path, header, rows) -> None:
    text = ",".join(header) + "\n" + "".join(
        ",".join(_csv_value(x) for x in row) + "\n" for row in rows
    )
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _cmd_bounds(args, argv) -> int:
    started = time.monotonic()
    entries = bounds_report(args.mode, args.n, args.k, args.ell)
    rows = []
    for e in entries:
        v: Fraction = e.value
        rows.append(
            (e.name, e.direction.value, e.exactness.value, v.numerator, v.denominator, float(v))
        )
    _emit_csv(args.out, ["name", "direction", "exactness", "numerator", "denominator", "decimal"], rows)
    if args.manifest_out:
        _write_manifest(args.manifest_out, "bounds", argv, [args.out], {"entries": len(rows)}, started)
    return 0


def _cmd_stats(args, argv) -> int:
    started = time.monotonic()
    host = HostSpec(Mode(args.mode), args.n, args.k)
    kind = _kind_from_args(args)
    rows = [(kind.family, kind.param, count_copies(host, kind))]
    _emit_csv(args.out, ["kind", "param", "count"], rows)
    if args.manifest_out:
        _write_manifest(args.manifest_out, "stats", argv, [args.out], {}, started)
    return 0


def _cmd_verify(args, argv) -> int:
    started = time.monotonic()
    coloring = load_coloring(args.file)
    kind = _kind_from_args(args)
    sample = None if args.exhaustive else (args.sample, args.seed)
    if not args.exhaustive and args.sample is None:
        raise SystemExit("choose --exhaustive or --sample COUNT")
    spec = CheckSpec(((kind, args.q),), sample=sample, require_proper=args.proper)
    report = check(coloring, spec)
    rows = []
    for res in report.results:
        witness = ""
        if res.first_violation is not None:
            witness = "-".join(str(v) for v in res.first_violation.copy)
        rows.append((res.kind.family, res.kind.param, res.q, res.copies_checked, res.violations, witness))
    if report.proper_pair is not None:
        rows.append(("proper", 0, 0, 0, 1, f"{report.proper_pair[0]}-{report.proper_pair[1]}"))
    _emit_csv(args.report, ["kind", "param", "q", "copies_checked", "violations", "first_witness"], rows)
    if not report.ok and report.first_violation is not None:
        fv = report.first_violation
        print(
            f"violation: {fv.kind} copy {fv.copy} has {fv.distinct_colors} < {fv.q} colors",
            file=sys.stderr,
        )
    if report.proper_pair is not None:
        print(f"violation: edges {report.proper_pair} share a vertex and a color", file=sys.stderr)
    if args.manifest_out:
        _write_manifest(
            args.manifest_out, "verify", argv, [args.report], {"ok": report.ok}, started
        )
    return 0 if report.ok else 1


def _run_pipeline(args):
    cfg = PackConfig(
        seed=args.seed,
        ell=args.ell,
        delta=args.delta,
        stall_limit=args.stall_limit,
        max_candidates=args.max_candidates,
    )
    if args.family == "cycles":
        state = pack_complete(args.n, args.k, cfg)
    elif args.family == "bipartite-cycles":
        state = pack_bipartite(args.n, args.k, cfg)
    else:
        state = pack_hyper(args.n, args.k, cfg)

    stats = {
        "family": args.family,
        "n": args.n,
        "k": args.k,
        "ell": state.ell,
        "delta": args.delta,
        "seed": args.seed,
        "tiles": state.accepted,
        "candidates": state.candidates_tried,
        "edges_total": state.host.edge_count,
        "edges_colored": state.coloring.colored_count,
        "stage1_palette": state.palette,
        "stage1_colors_used": len(state.coloring.used_colors()),
    }
    if args.stage1_only:
        return state.coloring, stats

    c2 = args.c2 if args.c2 is not None else _default_c2(state)
    seed = args.seed + 1
    retries = 0
    while True:
        fcfg = FinishConfig(seed=seed, c2=c2, max_resamples=args.max_resamples)
        try:
            result = finish(state, fcfg)
            break
        except NotFinished:
            retries += 1
            if retries > args.retries:
                raise
            c2 *= 2
            seed += 1
    stats.update(
        {
            "fresh_palette": result.c2,
            "resamples": result.resamples,
            "retries": retries,
        }
    )
    return result.coloring, stats


def _default_c2(state) -> int:
    from .finishing import default_fresh_palette

    return default_fresh_palette(state.host.n, state.cfg.delta)


def _cmd_construct(args, argv) -> int:
    started = time.monotonic()
    if args.family in ("cycles", "bipartite-cycles", "hyper-cliques"):
        coloring, stats = _run_pipeline(args)
    elif args.family == "p6":
        coloring, stats = color_p6(args.n, args.seed), {"family": "p6", "n": args.n, "seed": args.seed}
    elif args.family == "p7":
        coloring, stats = color_p7(args.n), {"family": "p7", "n": args.n}
    else:
        coloring, stats = (
            color_p8_proper(args.n, args.seed),
            {"family": "p8proper", "n": args.n, "seed": args.seed},
        )

    final = coloring.normalized()
    save_coloring(final, args.out)
    stats["final_palette"] = final.palette_size
    ls = leftover_stats(final)
    stats["max_uncolored_degree"] = ls.max_uncolored_degree
    stats["max_uncolored_codegree"] = ls.max_uncolored_codegree
    stats["max_dangerous_pairs"] = ls.max_dangerous_pairs
    _emit_csv(f"{args.out}.stats.csv", ["metric", "value"], sorted(stats.items()))
    _write_manifest(
        args.manifest_out or f"{args.out}.manifest.json",
        "construct",
        argv,
        [args.out, f"{args.out}.stats.csv"],
        {"palette": final.palette_size},
        started,
    )
    return 0


def _cmd_exact(args, argv) -> int:
    started = time.monotonic()
    host = HostSpec(Mode(args.mode), args.n, args.k)
    kind = _kind_from_args(args)
    problem = ExactProblem(host, ((kind, args.q),), require_proper=args.proper)
    result = min_colors(problem, budget=args.budget)
    print(result.value)
    if args.out:
        save_coloring(result.witness, args.out)
    if args.manifest_out:
        _write_manifest(
            args.manifest_out, "exact", argv, [args.out], {"value": result.value}, started
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grcolors", description=__doc__)
    ap.add_argument("--manifest", help="replay a previously written manifest")
    sub = ap.add_subparsers(dest="subcommand")

    c = sub.add_parser("construct", help="build a coloring and write a grc file")
    c.add_argument(
        "--family",
        required=True,
        choices=["cycles", "bipartite-cycles", "hyper-cliques", "p6", "p7", "p8proper"],
    )
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, default=4)
    c.add_argument("--ell", type=int)
    c.add_argument("--delta", type=float, default=0.15)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.add_argument("--stage1-only", action="store_true")
    c.add_argument("--c2", type=int, help="fresh palette size for stage 2")
    c.add_argument("--max-resamples", type=int, default=1_000_000)
    c.add_argument("--retries", type=int, default=3)
    c.add_argument("--stall-limit", type=int)
    c.add_argument("--max-candidates", type=int)
    c.add_argument("--manifest-out")
    c.set_defaults(fn=_cmd_construct)

    v = sub.add_parser("verify", help="check a grc coloring")
    v.add_argument("file")
    _add_kind_flags(v)
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--sample", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--proper", action="store_true")
    v.add_argument("--report", help="CSV output path (default stdout)")
    v.add_argument("--threads", type=int, default=1, help="accepted for compatibility; checking runs sequentially")
    v.add_argument("--manifest-out")
    v.set_defaults(fn=_cmd_verify)

    b = sub.add_parser("bounds", help="closed-form bound table as CSV")
    b.add_argument("--mode", required=True, choices=["complete", "bipartite", "uniform"])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--ell", type=int)
    b.add_argument("--out")
    b.add_argument("--manifest-out")
    b.set_defaults(fn=_cmd_bounds)

    e = sub.add_parser("exact", help="exact minimum palette by branch and bound")
    e.add_argument("--mode", default="complete", choices=["complete", "bipartite", "uniform"])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, default=2)
    _add_kind_flags(e)
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--proper", action="store_true")
    e.add_argument("--budget", type=int, default=2_000_000)
    e.add_argument("--out")
    e.add_argument("--manifest-out")
    e.set_defaults(fn=_cmd_exact)

    s = sub.add_parser("stats", help="copy counts as CSV")
    s.add_argument("--mode", required=True, choices=["complete", "bipartite", "uniform"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    _add_kind_flags(s)
    s.add_argument("--out")
    s.add_argument("--manifest-out")
    s.set_defaults(fn=_cmd_stats)
    return ap


def run(argv: list[str]) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.manifest:
        with open(args.manifest, "r", encoding="ascii") as fh:
            doc = json.load(fh)
        return run(doc["argv"])
    if args.subcommand is None:
        ap.print_usage(sys.stderr)
        return 2
    try:
        return args.fn(args, argv)
    except SystemExit:
        raise
    except BrokenPipeError:
        return 2
    except Exception as exc:  # runtime errors map to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
