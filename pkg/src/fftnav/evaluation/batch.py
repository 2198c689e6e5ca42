"""Batch experiment driver: map generation, episodes, and aggregation.

A batch is fully specified by an ExperimentConfig and runs the same
worlds through every planner variant, so variant comparisons are
paired.  Worlds are regenerated under escalated seeds until the A*
oracle finds a route for every robot at a clearance the planner can
actually use; the reported optimal lengths still use the tighter robot
radius.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..sim.engine import SimConfig, run_episode
from ..sim.planner import VARIANT_BUG_LEFT, VARIANT_BUG_RIGHT, VARIANT_PROPOSED
from ..sim.world import World, generate_world
from .astar import NoPathError, astar_optimal
from .metrics import MetricsReport, compute_metrics

ALL_VARIANTS = (VARIANT_PROPOSED, VARIANT_BUG_LEFT, VARIANT_BUG_RIGHT)

_SEED_STRIDE = 1_000_003


@dataclass
class ExperimentConfig:
    envs: tuple = ("forest", "rocky")
    n_maps: int = 20
    n_robots: int = 15
    seed: int = 7
    variants: tuple = ALL_VARIANTS
    density: float = 0.2
    resolution: float = 0.05
    feasible_clearance: float = 0.32
    sim: SimConfig = field(default_factory=SimConfig)

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "envs": list(self.envs),
            "n_maps": self.n_maps,
            "n_robots": self.n_robots,
            "seed": self.seed,
            "variants": list(self.variants),
            "density": self.density,
            "resolution": self.resolution,
            "feasible_clearance": self.feasible_clearance,
            "sim": self.sim.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        version = data.pop("version", 1)
        if version != 1:
            raise ValueError(f"unsupported config version {version}")
        sim = SimConfig.from_dict(data.pop("sim", {}))
        data["envs"] = tuple(data.get("envs", ("forest", "rocky")))
        data["variants"] = tuple(data.get("variants", ALL_VARIANTS))
        return cls(sim=sim, **data)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def feasible_world(env_kind: str, seed: int, config: ExperimentConfig, max_attempts: int = 64):
    """Generate a world where every robot has an A* route.

    Feasibility is checked at ``feasible_clearance`` inflation so the
    guaranteed corridors are wide enough for the planner's standoff, not
    just for the bare robot disc.  Returns (world, optimal_lengths) with
    lengths computed at the robot radius.
    """
    cfg = config.sim
    for attempt in range(max_attempts):
        world = generate_world(
            seed=seed + _SEED_STRIDE * attempt,
            env_kind=env_kind,
            density=config.density,
            n_robots=config.n_robots,
        )
        try:
            for start, goal in zip(world.starts, world.goals):
                astar_optimal(
                    world,
                    start,
                    goal,
                    resolution=config.resolution,
                    inflation=config.feasible_clearance,
                    smooth=False,
                )
        except NoPathError:
            continue
        lengths = [
            astar_optimal(world, start, goal, resolution=config.resolution, inflation=cfg.r0)
            for start, goal in zip(world.starts, world.goals)
        ]
        return world, lengths
    raise NoPathError(
        f"no feasible {env_kind} world found for seed {seed} in {max_attempts} attempts"
    )


@dataclass
class BatchResult:
    config: ExperimentConfig
    reports: dict
    collisions: dict
    elapsed_s: float

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "elapsed_s": self.elapsed_s,
            "collisions": {v: int(c) for v, c in self.collisions.items()},
            "metrics": {
                env: {variant: report.to_dict() for variant, report in by_variant.items()}
                for env, by_variant in self.reports.items()
            },
        }

    def table_rows(self):
        """Rows shaped like the reference results table."""
        rows = []
        for env, by_variant in self.reports.items():
            for variant, report in by_variant.items():
                rows.append(
                    {
                        "env": env,
                        "planner": variant,
                        "AR_pct": report.ar,
                        "APL_m": report.apl,
                        "SPL_pct": report.spl,
                    }
                )
        return rows


def run_batch(config: ExperimentConfig, progress=None) -> BatchResult:
    """Run every (env, map, variant) episode and aggregate metrics."""
    t0 = time.perf_counter()
    reports = {}
    collisions = {v: 0 for v in config.variants}
    for env in config.envs:
        summaries = {v: [] for v in config.variants}
        lengths_all = []
        for i in range(config.n_maps):
            world, lengths = feasible_world(env, config.seed + i, config)
            lengths_all.extend(lengths)
            for variant in config.variants:
                result = run_episode(world, variant, config.sim, record_trace=False)
                summaries[variant].extend(result.summaries)
                collisions[variant] += result.collisions
                if progress is not None:
                    progress(env, i, variant, result)
        reports[env] = {
            v: compute_metrics(summaries[v], lengths_all) for v in config.variants
        }
    return BatchResult(
        config=config,
        reports=reports,
        collisions=collisions,
        elapsed_s=time.perf_counter() - t0,
    )
