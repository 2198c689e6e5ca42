from .world import World, generate_world, world_from_dict, world_to_dict
from .sensor import blind_mask, raycast_scan
from .planner import PlannerParams, planner_params_for
from .engine import EpisodeResult, RobotState, SimConfig, TickReport, run_episode, trace_to_csv

__all__ = [
    "World",
    "generate_world",
    "world_from_dict",
    "world_to_dict",
    "blind_mask",
    "raycast_scan",
    "PlannerParams",
    "planner_params_for",
    "EpisodeResult",
    "RobotState",
    "SimConfig",
    "TickReport",
    "run_episode",
    "trace_to_csv",
]
