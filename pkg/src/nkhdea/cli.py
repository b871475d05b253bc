"""Command-line front end: ``gen``, ``run``, ``report`` and ``ttest``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import __version__
from .bench import SweepConfig, read_csv, run_sweep, select, write_landscapes
from .report import FORMATS, render, report, write_files
from .stats import welch_t_test


def _load_config(args):
    cfg = SweepConfig.from_file(args.config) if args.config else SweepConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    return cfg


def _formats(args, default):
    return tuple(dict.fromkeys(args.format)) if args.format else default


def _selector(text):
    criteria = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise argparse.ArgumentTypeError(f"expected key=value pairs, got {part!r}")
        criteria[key.strip()] = value.strip()
    return criteria


def cmd_gen(args):
    if args.config:
        cfg = _load_config(args)
    else:
        if args.n is None or args.k is None:
            raise ValueError("gen needs --config or both --n and --k")
        cfg = SweepConfig(n_values=(args.n,), k_values=(args.k,),
                          landscapes_per_cell=args.count,
                          master_seed=args.seed if args.seed is not None else 0)
    paths = write_landscapes(cfg, args.out)
    print(f"wrote {len(paths)} landscapes to {args.out}")
    return 0


def cmd_run(args):
    cfg = _load_config(args)
    total_runs = (len(cfg.cells()) * cfg.landscapes_per_cell * cfg.runs_per_landscape
                  * len(cfg.algorithms))

    def progress(done, total):
        if args.verbose and (done == total or done % 100 == 0):
            print(f"  {done}/{total} runs", file=sys.stderr)

    print(f"running {total_runs} runs ({cfg.generations} generations each)", file=sys.stderr)
    landscape_dir = args.landscapes or f"{args.out}/landscapes"
    result = run_sweep(cfg, threads=args.threads, landscape_dir=landscape_dir, progress=progress)
    report(result, args.out, _formats(args, ("csv", "table")))
    sys.stdout.write(render(result.rows, ("table",))["summary.txt"])
    return 0


def cmd_report(args):
    rows = read_csv(args.csv)
    formats = _formats(args, ("csv", "table"))
    files = render(rows, formats)
    write_files(files, args.out)
    if "table" in formats:
        sys.stdout.write(files["summary.txt"])
    return 0


def cmd_ttest(args):
    rows_a = read_csv(args.csv[0])
    rows_b = read_csv(args.csv[1]) if len(args.csv) > 1 else rows_a
    a = [r.final_best for r in select(rows_a, **args.a)]
    b = [r.final_best for r in select(rows_b, **args.b)]
    res = welch_t_test(a, b)
    if not res.significant_at_05:
        verdict = "no significant difference"
    else:
        verdict = "A > B" if res.t_statistic > 0 else "B > A"
    out = {
        "a": args.a, "b": args.b, "n_a": len(a), "n_b": len(b),
        "mean_a": sum(a) / len(a), "mean_b": sum(b) / len(b),
        "t": res.t_statistic, "df": res.degrees_of_freedom, "p": res.p_value,
        "significant_at_05": res.significant_at_05, "verdict": verdict,
        "method": "welch unpaired two-tailed",
    }
    print(json.dumps(out, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nkhdea", description="NK landscape benchmarks for the EA, HDEA and H2P engines."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required=True):
        p.add_argument("--out", required=out_required, help="output directory")
        p.add_argument("--format", action="append", choices=FORMATS,
                       help="output kinds (repeatable); default csv and table")

    p = sub.add_parser("gen", help="write landscape files")
    p.add_argument("--config", help="sweep config (JSON)")
    p.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--count", type=int, default=1, help="landscapes to write without --config")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="execute a sweep")
    p.add_argument("--config", help="sweep config (JSON); defaults reproduce the full study")
    p.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--landscapes", help="landscape directory (default <out>/landscapes)")
    p.add_argument("-v", "--verbose", action="store_true")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="summaries and plots from a runs CSV")
    p.add_argument("csv", help="raw runs CSV written by 'run'")
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("ttest", help="Welch t-test between two selections of runs")
    p.add_argument("csv", nargs="+", help="one CSV, or two (A from the first, B from the second)")
    p.add_argument("--a", type=_selector, required=True, help="e.g. n=100,k=10,p=30,algorithm=HDEA")
    p.add_argument("--b", type=_selector, required=True, help="e.g. n=100,k=10,p=30,algorithm=EA")
    p.set_defaults(func=cmd_ttest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ttest" and len(args.csv) > 2:
        parser.error("ttest takes one or two CSV files")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"nkhdea {args.command}: error: {exc}", file=sys.stderr)
        return 1
