"""Command-line driver: ``transversal <stage> [options]`` or ``transversal --kind <stage>``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import experiments
from .experiments import ExperimentConfig
from .svg import emit_scatter

SUBCOMMANDS = {
    "stats": "stats",
    "ply": "ply",
    "sample": None,  # --kind lines|segments|disks
    "planarize": "planarize",
    "bench": "query-bench",
}


def _add_common(p: argparse.ArgumentParser, kinds: Optional[Sequence[str]], default_kind: Optional[str]) -> None:
    p.add_argument("--input", action="append", default=[], metavar="PATH", help=".gg file, or DIMACS .co (arcs from --arcs or the sibling .gr)")
    p.add_argument("--arcs", metavar="PATH", help="DIMACS .gr arc file for a .co input")
    p.add_argument("--gen", action="append", default=[], metavar="SPEC", help="grid:k, nested:s, counter:n[:eps] or random:n[:seed]; comma lists allowed")
    if kinds:
        p.add_argument("--kind", choices=kinds, default=default_kind, required=default_kind is None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--target-ply", type=int, default=4)
    p.add_argument("--out", metavar="PATH", help="CSV destination (default: stdout)")
    p.add_argument("--svg", nargs="?", const="", default=None, metavar="PATH", help="also write a scatter (default path: --out with .svg)")
    p.add_argument("--stats", metavar="PATH", help="query-bench only: write structure statistics here")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transversal", description="Transversal complexity experiments on geometric graphs.")
    sub = p.add_subparsers(dest="command")
    for name, kind in SUBCOMMANDS.items():
        sp = sub.add_parser(name, help=f"run the {name} stage")
        if kind is None:
            _add_common(sp, ("lines", "segments", "disks"), "lines")
        else:
            _add_common(sp, None, None)
            sp.set_defaults(kind=kind)
    pl = sub.add_parser("plot", help="scatter of mean crossings vs n from transversal CSV files")
    pl.add_argument("csv", nargs="+", metavar="CSV")
    pl.add_argument("--out", metavar="PATH", help="SVG destination (default: stdout)")
    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    return p


def build_flat_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transversal", description="Transversal complexity experiments on geometric graphs.")
    _add_common(p, experiments.KINDS, None)
    return p


def _write(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def scatter_rows(table: experiments.Table) -> list:
    return [(r[1], r[5], r[3]) for r in table.rows]


def _run_stage(args) -> int:
    cfg = ExperimentConfig(
        kind=args.kind,
        inputs=tuple(args.input),
        arcs=args.arcs,
        gens=tuple(args.gen),
        trials=args.trials,
        seed=args.seed,
        target_ply=args.target_ply,
    )
    if args.stats and cfg.kind != "query-bench":
        raise ValueError("--stats applies to the query-bench stage only")
    if args.svg is not None and cfg.kind not in ("lines", "segments", "disks"):
        raise ValueError("--svg needs a lines, segments or disks run")
    table, structure = experiments.run(cfg)
    _write(table.to_csv(), args.out)
    if structure is not None and args.stats:
        Path(args.stats).write_text(structure.to_csv(), encoding="utf-8")
    if args.svg is not None:
        path = args.svg or (str(Path(args.out).with_suffix(".svg")) if args.out else None)
        if not path:
            raise ValueError("--svg without a path needs --out")
        Path(path).write_text(emit_scatter(scatter_rows(table)), encoding="utf-8")
    return 0


def _run_plot(args) -> int:
    rows = []
    for path in args.csv:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = {"n", "mean", "kind"} - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{path}: not a transversal CSV (missing {', '.join(sorted(missing))})")
            rows += [(int(r["n"]), float(r["mean"]), r["kind"]) for r in reader]
    _write(emit_scatter(rows), args.out)
    return 0


def _run_serve(args) -> int:
    import uvicorn

    from .api.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    known = set(SUBCOMMANDS) | {"plot", "serve"}
    subcommand = bool(argv) and argv[0] in known
    parser = build_parser() if subcommand or not argv or argv[0] in ("-h", "--help") else build_flat_parser()
    args = parser.parse_args(argv)
    if subcommand is False and not hasattr(args, "kind"):
        parser.print_help(sys.stderr)
        return 2
    try:
        if getattr(args, "command", None) == "plot":
            return _run_plot(args)
        if getattr(args, "command", None) == "serve":
            return _run_serve(args)
        return _run_stage(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"transversal: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
