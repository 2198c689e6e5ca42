"""Deterministic fixed-timestep episode runner.

Tick order: sense for every active robot from the same position snapshot,
broadcast compressed observations from robots in boundary-follow mode,
plan in robot-id order, then apply all motions simultaneously, resolve
collisions, and check arrivals.  Everything is a pure function of the
world, the config, and the planner variant; there is no randomness in the
loop, so traces are reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from ..filters import make_filter_bank
from ..geometry import SensorConfig, derive_protective_model, wrap_angle
from ..perception import compress, decode_wire, encode_wire
from .planner import (
    Action,
    InboxMessage,
    MODE_BF_LEFT,
    MODE_BF_RIGHT,
    MODE_TO_GOAL,
    PlannerParams,
    planner_params_for,
    step_planner,
)
from .sensor import raycast_scan
from .world import World


@dataclass
class SimConfig:
    """Every parameter a swarm episode depends on."""

    r0: float = 0.15
    r: float = 0.3
    range_max: float = 3.0
    m: int = 360
    blind_arc_deg: float = 15.0
    dt: float = 0.1
    speed: float = 0.5
    rot_rate_deg: float = 90.0
    arrive_radius: float = 0.1
    max_ticks: int = 3000
    planner: PlannerParams = field(default_factory=PlannerParams)

    def sensor_config(self) -> SensorConfig:
        half = math.radians(self.blind_arc_deg) / 2.0
        return SensorConfig(
            theta_fov=2.0 * math.pi,
            m=self.m,
            range_max=self.range_max,
            blind_arc=(math.pi - half, math.pi + half),
        )

    def model(self):
        return derive_protective_model(self.r0, self.r)

    def to_dict(self) -> dict:
        data = asdict(self)
        planner = data.pop("planner")
        planner.pop("variant", None)
        data["planner"] = planner
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        data = dict(data)
        planner = data.pop("planner", {})
        return cls(planner=PlannerParams(**planner), **data)


@dataclass
class RobotState:
    id: int
    x: float
    y: float
    heading: float
    goal: tuple
    step_length: float
    mode: str = MODE_TO_GOAL
    hit_dist: float = math.inf
    best_dist: float = math.inf
    stuck_count: int = 0
    esc_dir: float = math.nan
    last_p: float = math.nan
    # (x, y, ticks_left) world anchors of recently impassable throats
    avoids: list = field(default_factory=list)
    path_len: float = 0.0
    arrived: bool = False
    frozen: bool = False


@dataclass(frozen=True)
class TickReport:
    tick: int
    robot_id: int
    x: float
    y: float
    heading: float
    mode: str
    p: float
    sent_bytes: int
    recv_bytes: int
    collided: bool
    arrived: bool


@dataclass
class RobotSummary:
    robot_id: int
    success: bool
    collided: bool
    path_len: float
    ticks: int


@dataclass
class EpisodeResult:
    variant: str
    summaries: list
    trace: list
    ticks: int
    total_sent_bytes: int

    @property
    def collisions(self) -> int:
        return sum(1 for s in self.summaries if s.collided)


def run_episode(world: World, variant: str, config: SimConfig, record_trace: bool = True) -> EpisodeResult:
    """Run one episode of every robot crossing the arena.

    Ends when each robot has arrived or is frozen by a collision, or at
    the tick limit.  Robots that time out count as failures.
    """
    cfg = config.sensor_config()
    model = config.model()
    bank = make_filter_bank(cfg, model)
    params = planner_params_for(variant, config.planner)
    rot_step = math.radians(config.rot_rate_deg) * config.dt
    step_len = config.speed * config.dt

    robots = []
    for i, (start, goal) in enumerate(zip(world.starts, world.goals)):
        robots.append(
            RobotState(
                id=i,
                x=float(start[0]),
                y=float(start[1]),
                heading=0.5 * math.pi,
                goal=(float(goal[0]), float(goal[1])),
                step_length=step_len,
            )
        )

    trace = []
    total_sent = 0
    ticks_done = 0
    finish_tick = {r.id: config.max_ticks for r in robots}

    for tick in range(config.max_ticks):
        active = [r for r in robots if not r.arrived and not r.frozen]
        if not active:
            break
        ticks_done = tick + 1
        present = [r for r in robots if not r.arrived]
        poses = {r.id: (r.x, r.y, r.heading) for r in present}

        scans = {}
        for r in active:
            others = [
                (poses[o.id][0], poses[o.id][1], config.r0)
                for o in present
                if o.id != r.id
            ]
            scans[r.id] = raycast_scan(world, poses[r.id], cfg, others, stamp=tick)

        inboxes = {r.id: [] for r in active}
        sent_bytes = {r.id: 0 for r in robots}
        recv_bytes = {r.id: 0 for r in robots}
        for r in active:
            if r.mode not in (MODE_BF_LEFT, MODE_BF_RIGHT):
                continue
            payload = encode_wire(compress(scans[r.id], bank, sender_id=r.id))
            sent_bytes[r.id] += len(payload)
            total_sent += len(payload)
            for other in active:
                if other.id == r.id:
                    continue
                dist = math.hypot(other.x - r.x, other.y - r.y)
                if dist <= cfg.range_max:
                    obs = decode_wire(payload)
                    inboxes[other.id].append(
                        InboxMessage(obs=obs, sender_x=r.x, sender_y=r.y, distance=dist)
                    )
                    recv_bytes[other.id] += len(payload)

        actions = {}
        for r in active:
            actions[r.id] = step_planner(
                r, scans[r.id], inboxes[r.id], r.goal, model, bank, params
            )

        for r in active:
            act = actions[r.id]
            if act.kind == "rotate":
                delta = min(max(act.value, -rot_step), rot_step)
                r.heading = wrap_angle(r.heading + delta)
            else:
                r.x += act.value * math.cos(r.heading)
                r.y += act.value * math.sin(r.heading)
                r.path_len += act.value

        collided_now = set()
        for r in active:
            d2 = (world.cx - r.x) ** 2 + (world.cy - r.y) ** 2
            if world.cx.size and (d2 < (world.cr + config.r0) ** 2).any():
                collided_now.add(r.id)
        not_arrived = [r for r in robots if not r.arrived]
        for a in range(len(not_arrived)):
            for b in range(a + 1, len(not_arrived)):
                ra, rb = not_arrived[a], not_arrived[b]
                if ra.frozen and rb.frozen:
                    continue
                if math.hypot(ra.x - rb.x, ra.y - rb.y) < 2.0 * config.r0:
                    collided_now.add(ra.id)
                    collided_now.add(rb.id)
        for r in robots:
            if r.id in collided_now and not r.frozen:
                r.frozen = True

        for r in active:
            if r.frozen:
                continue
            if math.hypot(r.goal[0] - r.x, r.goal[1] - r.y) <= config.arrive_radius:
                r.arrived = True
                finish_tick[r.id] = tick + 1

        if record_trace:
            for r in robots:
                trace.append(
                    TickReport(
                        tick=tick,
                        robot_id=r.id,
                        x=r.x,
                        y=r.y,
                        heading=r.heading,
                        mode=r.mode,
                        p=r.last_p,
                        sent_bytes=sent_bytes[r.id],
                        recv_bytes=recv_bytes[r.id],
                        collided=r.frozen,
                        arrived=r.arrived,
                    )
                )

    summaries = [
        RobotSummary(
            robot_id=r.id,
            success=r.arrived,
            collided=r.frozen,
            path_len=r.path_len,
            ticks=finish_tick[r.id] if r.arrived else ticks_done,
        )
        for r in robots
    ]
    return EpisodeResult(
        variant=variant,
        summaries=summaries,
        trace=trace,
        ticks=ticks_done,
        total_sent_bytes=total_sent,
    )


def trace_to_csv(trace, fh):
    """Write tick reports as CSV; floats use repr so traces are exact."""
    fh.write("tick,robot_id,x,y,heading,mode,p,sent_bytes,recv_bytes,collided,arrived\n")
    for row in trace:
        fh.write(
            f"{row.tick},{row.robot_id},{row.x!r},{row.y!r},{row.heading!r},"
            f"{row.mode},{row.p!r},{row.sent_bytes},{row.recv_bytes},"
            f"{int(row.collided)},{int(row.arrived)}\n"
        )
