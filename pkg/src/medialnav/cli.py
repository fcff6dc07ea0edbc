"""Command line front end: scenario runs, shape and table precomputation,
and benchmark sweeps.

Exit codes: 0 clean termination, 2 schema error, 3 coverage failure during a
shape build.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from .cache import (
    load_shape_cache, load_table_cache, precompute as precompute_caches,
    shape_library_hash, write_shape_cache,
)
from .medial import BuildParams, CoverageFailure, build_shape
from .minkowski import build_tables, register_shape_types
from .scenarios import (
    DEFAULT_SHAPES, Scenario, SchemaError, build_world, load_scenario,
)
from .sim import (
    World, false_positive_report, format_log_rows, metrics_report, run,
)
from .svgout import write_frame

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_COVERAGE = 3


def _build_library(sc, params=None):
    shapes = {}
    for name, contour in sc.shapes.items():
        shapes[name] = build_shape(contour, params, name=name)
    return shapes


def cmd_run(args) -> int:
    try:
        sc = load_scenario(args.scenario)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.dt:
        sc.world.dt = args.dt
    if args.tau:
        sc.world.tau = args.tau
    if args.seed is not None:
        sc.seed = args.seed

    shape_cache = None
    if args.shape_cache and os.path.exists(args.shape_cache):
        shape_cache = load_shape_cache(args.shape_cache)
    try:
        world = build_world(sc, mode=args.mode, shape_cache=shape_cache)
    except CoverageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    if args.use_tables:
        shapes = world.shapes
        table = None
        if args.table_cache and os.path.exists(args.table_cache):
            table = load_table_cache(args.table_cache, shapes,
                                     expect_hash=shape_library_hash(shapes))
        if table is None:
            table = build_tables(list(shapes.values()), args.theta_e)
        else:
            register_shape_types(shapes.values(), table.types,
                                 {sig: i for i, sig in enumerate(table.types)})
        world.table = table

    frame_hook = None
    if args.svg_every:
        os.makedirs(args.svg_dir, exist_ok=True)

        def frame_hook(w, k):
            if k % args.svg_every == 0 and k < args.steps:
                write_frame(os.path.join(args.svg_dir, f"frame_{k:06d}.svg"), w)

    rows = run(world, args.steps, record_collisions=args.metrics is not None,
               frame_hook=frame_hook, stop_when_reached=not args.no_early_stop)

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_log_rows(rows))
    if args.metrics:
        rep = metrics_report(world)
        with open(args.metrics, "w", encoding="utf-8") as fh:
            json.dump(rep.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"ran {world.step_index} steps, "
          f"{sum(1 for a in world.agents if a.reached)}/{len(world.agents)} agents reached")
    return EXIT_OK


def cmd_build_shapes(args) -> int:
    try:
        sc = load_scenario(args.library)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        shapes = _build_library(sc)
    except CoverageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    write_shape_cache(args.out, shapes)
    print(f"wrote {len(shapes)} shapes to {args.out}")
    return EXIT_OK


def cmd_precompute(args) -> int:
    try:
        sc = load_scenario(args.library)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        shapes = _build_library(sc)
    except CoverageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    table, lib_hash = precompute_caches(shapes, args.theta_e,
                                        shape_path=args.shapes_out,
                                        table_path=args.tables_out)
    n_pairs = len(table.types) ** 2
    print(f"{len(shapes)} shapes, {len(table.types)} tuple types, "
          f"{n_pairs} pair tables x {table.n_buckets} buckets "
          f"(hash {lib_hash[:12]})")
    return EXIT_OK


def _bench_world(kind, n, mode, table_mode, theta_e):
    doc = {
        "shapes": {"disc": DEFAULT_SHAPES["disc"], "capsule": DEFAULT_SHAPES["capsule"]},
        "generators": [{"kind": kind, "n": n,
                        "radius": max(10.0, 0.45 * n),
                        "shapes": ["capsule"] if kind == "antipodal" else None}],
    }
    if doc["generators"][0]["shapes"] is None:
        del doc["generators"][0]["shapes"]
    from .scenarios import parse_scenario
    sc = parse_scenario(doc)
    world = build_world(sc, mode=mode)
    if table_mode:
        world.table = build_tables(list(world.shapes.values()), theta_e)
    return world


def cmd_bench(args) -> int:
    counts = [int(v) for v in args.counts.split(",")]
    modes = [m.strip() for m in args.modes.split(",")]
    print(f"{'agents':>7s} " + " ".join(f"{m:>14s}" for m in modes))
    results = {}
    for n in counts:
        row = []
        for m in modes:
            mode = "disc" if m == "disc" else "ctmat"
            table_mode = m == "ctmat-table"
            world = _bench_world(args.family, n, mode, table_mode, args.theta_e)
            run(world, args.warmup, stop_when_reached=False)
            t0 = time.perf_counter()
            run(world, args.frames, stop_when_reached=False)
            dt = (time.perf_counter() - t0) / args.frames
            row.append(dt)
            results[(n, m)] = dt
        print(f"{n:>7d} " + " ".join(f"{1000 * v:>12.3f}ms" for v in row))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({f"{n},{m}": v for (n, m), v in sorted(results.items())},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def make_parser():
    ap = argparse.ArgumentParser(prog="medialnav",
                                 description="arc/segment-shaped multi-agent navigation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="trajectory CSV path")
    p.add_argument("--metrics", default=None, help="metrics JSON path")
    p.add_argument("--svg-every", type=int, default=0, dest="svg_every")
    p.add_argument("--svg-dir", default="frames", dest="svg_dir")
    p.add_argument("--use-tables", action="store_true", dest="use_tables")
    p.add_argument("--table-cache", default=None, dest="table_cache")
    p.add_argument("--shape-cache", default=None, dest="shape_cache")
    p.add_argument("--theta-e", type=float, default=math.pi / 36, dest="theta_e")
    p.add_argument("--mode", choices=["ctmat", "disc"], default="ctmat")
    p.add_argument("--no-early-stop", action="store_true", dest="no_early_stop")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("build-shapes", help="build shapes from a library file")
    p.add_argument("library")
    p.add_argument("-o", "--out", default="shapes.json")
    p.set_defaults(func=cmd_build_shapes)

    p = sub.add_parser("precompute", help="write shape and Minkowski table caches")
    p.add_argument("library")
    p.add_argument("--theta-e", type=float, default=math.pi / 36, dest="theta_e")
    p.add_argument("--shapes-out", default="shapes.json", dest="shapes_out")
    p.add_argument("--tables-out", default="tables.json", dest="tables_out")
    p.set_defaults(func=cmd_precompute)

    p = sub.add_parser("bench", help="frame-time sweep over agent counts")
    p.add_argument("--family", default="antipodal",
                   choices=["antipodal", "crossing", "narrow_door"])
    p.add_argument("--counts", default="10,50,100")
    p.add_argument("--modes", default="ctmat-exact,ctmat-table,disc")
    p.add_argument("--frames", type=int, default=50)
    p.add_argument("--warmup", type=int, default=5)
    p.add_argument("--theta-e", type=float, default=math.pi / 36, dest="theta_e")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
