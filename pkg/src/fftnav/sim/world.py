"""Random world generation for the swarm experiments.

Worlds are square arenas filled with non-overlapping circular obstacles at
a target density.  The two environment kinds differ only in their radius
distributions.  Start positions sit on a line near one edge with matching
goals on the opposite edge; obstacle placement keeps a clearance disc
around each so no robot spawns or finishes inside a wall of rock.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ENV_FOREST = "forest"
ENV_ROCKY = "rocky"

RADIUS_RANGES = {
    ENV_FOREST: (0.1, 0.3),
    ENV_ROCKY: (0.2, 0.6),
}

# minimum surface-to-surface gap between obstacles, and the free disc kept
# around every start and goal point
_OBSTACLE_GAP = 0.1
_ENDPOINT_CLEARANCE = 0.5
_PLACEMENT_TRIES = 4000


@dataclass
class World:
    extent: tuple
    env_kind: str
    seed: int
    cx: np.ndarray
    cy: np.ndarray
    cr: np.ndarray
    starts: list = field(default_factory=list)
    goals: list = field(default_factory=list)

    @property
    def n_obstacles(self) -> int:
        return self.cx.size


def _endpoint_lines(extent, n_robots):
    w, h = extent
    xs = (w - (n_robots - 1)) / 2.0 + np.arange(n_robots)
    starts = [(float(x), 1.0) for x in xs]
    goals = [(float(x), h - 1.0) for x in xs]
    return starts, goals


def generate_world(
    seed: int,
    env_kind: str,
    density: float = 0.2,
    extent=(20.0, 20.0),
    n_robots: int = 15,
) -> World:
    """Rejection-sample a world; deterministic per seed.

    Obstacle count is ``round(density * area)``.  Radii are uniform within
    the environment's range; centers are uniform with the obstacle fully
    inside the arena, rejected on overlap with earlier obstacles or with
    the start/goal clearance discs.

    Raises
    ------
    ValueError
        If density is not positive, the environment kind is unknown, or
        placement fails after the retry budget (density too high).
    """
    if density < 0.0:
        raise ValueError(f"density must be >= 0, got {density}")
    if env_kind not in RADIUS_RANGES:
        raise ValueError(f"unknown environment kind {env_kind!r}")
    w, h = float(extent[0]), float(extent[1])
    count = int(round(density * w * h))
    r_lo, r_hi = RADIUS_RANGES[env_kind]
    starts, goals = _endpoint_lines((w, h), n_robots)
    keep = np.array(starts + goals)
    rng = np.random.default_rng(seed)
    cx = np.empty(count)
    cy = np.empty(count)
    cr = np.empty(count)
    for i in range(count):
        radius = rng.uniform(r_lo, r_hi)
        placed = False
        for _ in range(_PLACEMENT_TRIES):
            x = rng.uniform(radius, w - radius)
            y = rng.uniform(radius, h - radius)
            if keep.size:
                d2 = (keep[:, 0] - x) ** 2 + (keep[:, 1] - y) ** 2
                if (d2 < (radius + _ENDPOINT_CLEARANCE) ** 2).any():
                    continue
            if i:
                d2 = (cx[:i] - x) ** 2 + (cy[:i] - y) ** 2
                if (d2 < (cr[:i] + radius + _OBSTACLE_GAP) ** 2).any():
                    continue
            cx[i] = x
            cy[i] = y
            cr[i] = radius
            placed = True
            break
        if not placed:
            raise ValueError(
                f"placement failure: could not fit obstacle {i + 1}/{count} "
                f"after {_PLACEMENT_TRIES} tries"
            )
    return World(
        extent=(w, h),
        env_kind=env_kind,
        seed=int(seed),
        cx=cx,
        cy=cy,
        cr=cr,
        starts=starts,
        goals=goals,
    )


def world_to_dict(world: World) -> dict:
    """JSON-ready form of a world."""
    return {
        "version": 1,
        "extent": list(world.extent),
        "env_kind": world.env_kind,
        "seed": world.seed,
        "obstacles": [
            [float(x), float(y), float(r)]
            for x, y, r in zip(world.cx, world.cy, world.cr)
        ],
        "starts": [list(p) for p in world.starts],
        "goals": [list(p) for p in world.goals],
    }


def world_from_dict(data: dict) -> World:
    version = data.get("version", 1)
    if version != 1:
        raise ValueError(f"unsupported world file version {version}")
    obstacles = np.asarray(data["obstacles"], dtype=np.float64).reshape(-1, 3)
    return World(
        extent=tuple(data["extent"]),
        env_kind=data["env_kind"],
        seed=int(data["seed"]),
        cx=obstacles[:, 0].copy(),
        cy=obstacles[:, 1].copy(),
        cr=obstacles[:, 2].copy(),
        starts=[tuple(p) for p in data["starts"]],
        goals=[tuple(p) for p in data["goals"]],
    )
