"""Command-line entry points for maps, episodes, metrics, and benchmarks.

Subcommands write into --out (or the FFTNAV_OUT_DIR environment
variable); every error exits nonzero with a one-line diagnostic on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from .evaluation import (
    ExperimentConfig,
    bench_filtering,
    bench_kernels,
    feasible_world,
    run_batch,
)
from .sim.engine import SimConfig, run_episode, trace_to_csv
from .sim.planner import VARIANT_PROPOSED
from .sim.world import world_from_dict, world_to_dict


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("FFTNAV_OUT_DIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _env_list(value: str):
    if value == "both":
        return ["forest", "rocky"]
    return [value]


def _config_from_args(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        return ExperimentConfig.load(args.config)
    cfg = ExperimentConfig()
    if getattr(args, "env", None):
        cfg.envs = tuple(_env_list(args.env))
    for name in ("maps", "robots", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, {"maps": "n_maps", "robots": "n_robots", "seed": "seed"}[name], value)
    return cfg


def _cmd_gen_maps(args) -> int:
    out = _out_dir(args)
    cfg = _config_from_args(args)
    for env in cfg.envs:
        for i in range(cfg.n_maps):
            world, lengths = feasible_world(env, cfg.seed + i, cfg)
            data = world_to_dict(world)
            data["optimal_lengths"] = lengths
            path = out / f"{env}-map-{i:03d}.json"
            with open(path, "w") as fh:
                json.dump(data, fh)
                fh.write("\n")
            print(f"wrote {path} ({world.n_obstacles} obstacles)")
    return 0


def _cmd_run(args) -> int:
    out = _out_dir(args)
    cfg = _config_from_args(args)
    sim = cfg.sim
    summary = []
    for env in cfg.envs:
        for i in range(cfg.n_maps):
            if args.worlds:
                path = Path(args.worlds) / f"{env}-map-{i:03d}.json"
                with open(path) as fh:
                    world = world_from_dict(json.load(fh))
            else:
                world, _ = feasible_world(env, cfg.seed + i, cfg)
            result = run_episode(world, args.planner, sim)
            trace_path = out / f"trace-{env}-{i:03d}-{args.planner}.csv"
            with open(trace_path, "w") as fh:
                trace_to_csv(result.trace, fh)
            successes = sum(1 for s in result.summaries if s.success)
            summary.append(
                {
                    "env": env,
                    "map": i,
                    "planner": args.planner,
                    "ticks": result.ticks,
                    "successes": successes,
                    "collisions": result.collisions,
                    "sent_bytes": result.total_sent_bytes,
                    "trace": trace_path.name,
                }
            )
            print(
                f"{env} map {i}: {successes}/{len(result.summaries)} arrived, "
                f"{result.collisions} collisions, {result.ticks} ticks"
            )
    with open(out / "run-summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_eval(args) -> int:
    out = _out_dir(args)
    cfg = _config_from_args(args)
    result = run_batch(cfg)
    rows = result.table_rows()
    with open(out / "metrics.json", "w") as fh:
        json.dump(result.to_dict(), fh, indent=2)
        fh.write("\n")
    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["env", "planner", "AR_pct", "APL_m", "SPL_pct"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"{'env':<8} {'planner':<10} {'AR %':>7} {'APL m':>8} {'SPL %':>7}")
    for row in rows:
        apl = "-" if math.isnan(row["APL_m"]) else f"{row['APL_m']:.2f}"
        print(
            f"{row['env']:<8} {row['planner']:<10} {row['AR_pct']:>7.1f} "
            f"{apl:>8} {row['SPL_pct']:>7.1f}"
        )
    print(f"batch took {result.elapsed_s:.1f} s")
    return 0


def _cmd_bench(args) -> int:
    stats = bench_filtering(m=args.m, iterations=args.iterations)
    print(f"extract+compress, M={args.m}, n={stats.n}")
    print(
        f"  median {stats.median_us:.1f} us   mean {stats.mean_us:.1f} us   "
        f"p99 {stats.p99_us:.1f} us"
    )
    if args.kernels:
        table = bench_kernels(iterations=args.kernel_iterations)
        for kernel, by_backend in table.items():
            for backend, st in by_backend.items():
                print(
                    f"  {kernel:<8} {backend:<6} median {st.median_us:9.1f} us   "
                    f"mean {st.mean_us:9.1f} us"
                )
    return 0


def _cmd_export(args) -> int:
    out = _out_dir(args)
    src = Path(args.trace)
    by_robot: dict = {}
    with open(src, newline="") as fh:
        for row in csv.DictReader(fh):
            rid = int(row["robot_id"])
            point = (float(row["x"]), float(row["y"]))
            points = by_robot.setdefault(rid, [])
            if not points or points[-1] != point:
                points.append(point)
    dest = out / f"{src.stem}-paths.csv"
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["robot_id", "x", "y"])
        for rid in sorted(by_robot):
            for x, y in by_robot[rid]:
                writer.writerow([rid, repr(x), repr(y)])
    print(f"wrote {dest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fftnav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, planner=False):
        p.add_argument("--env", choices=["forest", "rocky", "both"], default=None)
        p.add_argument("--maps", type=int, default=None)
        p.add_argument("--robots", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="experiment config JSON")
        p.add_argument("--out", default=None, help="output directory (or FFTNAV_OUT_DIR)")
        if planner:
            p.add_argument("--planner", default=VARIANT_PROPOSED)

    p_gen = sub.add_parser("gen-maps", help="generate solvable worlds as JSON")
    add_common(p_gen)
    p_gen.set_defaults(func=_cmd_gen_maps)

    p_run = sub.add_parser("run", help="run episodes and write traces")
    add_common(p_run, planner=True)
    p_run.add_argument("--worlds", default=None, help="directory of gen-maps output")
    p_run.set_defaults(func=_cmd_run)

    p_eval = sub.add_parser("eval", help="run the full batch and emit metrics")
    add_common(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_bench = sub.add_parser("bench", help="latency micro-benchmarks")
    p_bench.add_argument("--m", type=int, default=360)
    p_bench.add_argument("--iterations", type=int, default=200)
    p_bench.add_argument("--kernels", action="store_true", help="also compare kernel backends")
    p_bench.add_argument("--kernel-iterations", type=int, default=50)
    p_bench.add_argument("--out", default=None)
    p_bench.set_defaults(func=_cmd_bench)

    p_export = sub.add_parser("export", help="convert a trace CSV to per-robot paths")
    p_export.add_argument("--trace", required=True)
    p_export.add_argument("--out", default=None)
    p_export.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
