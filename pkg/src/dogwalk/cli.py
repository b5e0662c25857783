"""Command line: run suites, plot traces, dump built-in scenarios.

Exit codes: 0 success, 1 some run missed its expected outcome, 2 bad input
(config, override, trace or scenario name), 3 file system error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from .config import ConfigError, RunSpec, builtin_suite, dump_suite, expand, parse_override, parse_suite
from .engine import SimOutcome, run
from .export import (TraceError, meta_json, read_trace, summary_csv, summary_row, svg_plot,
                     trace_csv, write_text)
from .scenarios import metrics

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("dogwalk")


def _simulate(job: RunSpec) -> SimOutcome:
    sc = job.scenario
    return run(sc.world, sc.configs, sc.mode)


def _safe_dir(run_id: str) -> str:
    return "".join(c if c.isalnum() or c in "._=-" else "_" for c in run_id)


def cmd_run(config: str, out: str, overrides: Sequence[str] = (), jobs: int = 1) -> int:
    try:
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        log.error("cannot read %s: %s", config, exc)
        return EXIT_IO
    try:
        suite = parse_suite(text)
        runs = expand(suite, [parse_override(o) for o in overrides])
    except ConfigError as exc:
        log.error("%s: %s", config, exc)
        return EXIT_PARSE

    if jobs > 1 and len(runs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_simulate, runs))
    else:
        outcomes = [_simulate(job) for job in runs]

    rows = []
    mismatched = 0
    try:
        os.makedirs(out, exist_ok=True)
        for job, outcome in zip(runs, outcomes):
            sc = job.scenario
            m = metrics(outcome, sc.world, sc.configs.sim.auv_radius, sc.configs.sim.asv_radius)
            run_dir = os.path.join(out, _safe_dir(job.run_id))
            os.makedirs(run_dir, exist_ok=True)
            write_text(os.path.join(run_dir, "trace.csv"), trace_csv(outcome.trace))
            write_text(os.path.join(run_dir, "trace.meta.json"),
                       meta_json(job.run_id, sc, outcome, m, job.sweep_point))
            rows.append(summary_row(job.run_id, sc, outcome, m))
            ok = sc.expected is None or outcome.status == sc.expected
            mismatched += not ok
            log.info("%-40s %-14s t=%7.2fs%s", job.run_id, outcome.status.value,
                     outcome.final_time, "" if ok else f"  (expected {sc.expected.value})")
        write_text(os.path.join(out, "summary.csv"), summary_csv(rows))
    except OSError as exc:
        log.error("cannot write results to %s: %s", out, exc)
        return EXIT_IO
    return EXIT_MISMATCH if mismatched else EXIT_OK


def cmd_plot(trace: str, out: str) -> int:
    try:
        rows, meta = read_trace(trace)
        svg = svg_plot(rows, meta)
    except (OSError, TraceError, ValueError) as exc:
        log.error("cannot plot %s: %s", trace, exc)
        return EXIT_PARSE
    try:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        write_text(out, svg)
    except OSError as exc:
        log.error("cannot write %s: %s", out, exc)
        return EXIT_IO
    return EXIT_OK


def cmd_dump_builtin(name: str, out: str) -> int:
    try:
        text = dump_suite(builtin_suite(name))
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    try:
        if out == "-":
            sys.stdout.write(text)
        else:
            write_text(out, text)
    except OSError as exc:
        log.error("cannot write %s: %s", out, exc)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dogwalk",
                                description="Leader-follower surface/underwater vehicle simulator.")
    p.add_argument("-v", "--verbose", action="store_true", help="log every run")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run every scenario of a config file")
    r.add_argument("--config", required=True, help="YAML suite file")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a dotted file key in every run, e.g. sim.seed=3")
    r.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    pl = sub.add_parser("plot", help="draw a trace as a top-down SVG")
    pl.add_argument("--trace", required=True, help="trace.csv written by 'run'")
    pl.add_argument("--out", required=True, help="SVG file to write")

    d = sub.add_parser("dump-builtin", help="write a built-in scenario as a config file")
    d.add_argument("name", help="case1, case2, case3, obscured_tank, or e.g. case2_baseline")
    d.add_argument("--out", required=True, help="YAML file to write ('-' for stdout)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "run":
        if args.jobs < 1:
            log.error("--jobs must be >= 1")
            return EXIT_PARSE
        return cmd_run(args.config, args.out, args.overrides, args.jobs)
    if args.command == "plot":
        return cmd_plot(args.trace, args.out)
    return cmd_dump_builtin(args.name, args.out)


if __name__ == "__main__":
    sys.exit(main())
