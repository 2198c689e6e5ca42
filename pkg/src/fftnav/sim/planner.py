"""Bug-style planner driven by filtered safe directions and fused decisions.

Robots move straight or rotate in place.  In to-goal mode a robot advances
along the safe direction nearest its goal bearing.  When no goal-ward safe
direction exists it has encountered an obstacle: the turn side comes from
the fused probability (own quadrant areas plus neighbor reports), and the
robot skirts the blocking occupied sector along its safe edge until
the goal-ward direction is safe again and it is closer to the goal than
where it hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..filters import FilterBank
from ..fusion import (
    NeighborReading,
    SIDE_LEFT,
    SIDE_RIGHT,
    decide_side,
    fuse,
    p_neighbor,
    p_self,
    quadrant_areas,
)
from ..geometry import (
    ProtectiveModel,
    QUADRANT_I,
    QUADRANT_II,
    QUADRANT_III,
    QUADRANT_IV,
    classify_quadrant,
    wrap_angle,
)
from ..perception import SafeDirections, Scan, compress, extract_safe_directions
from .sensor import blind_mask

MODE_TO_GOAL = "to-goal"
MODE_BF_LEFT = "bf-left"
MODE_BF_RIGHT = "bf-right"

VARIANT_PROPOSED = "proposed"
VARIANT_BUG_LEFT = "bug-left"
VARIANT_BUG_RIGHT = "bug-right"


@dataclass(frozen=True)
class PlannerParams:
    """Planner variant plus the follow-controller tuning constants.

    ``force_p_self`` and ``zero_neighbor_weights`` are the baseline hooks:
    with neighbors zeroed and P_s pinned to 1 (or 0) the planner becomes
    the fixed-side bug-left (bug-right) baseline, decision for decision.
    """

    variant: str = VARIANT_PROPOSED
    force_p_self: float | None = None
    zero_neighbor_weights: bool = False
    heading_tol: float = 0.12
    # both margins must stay >= one tick of another robot's travel plus
    # a buffer; the swept-segment test already accounts for our own
    # motion, so only the other party's closing speed can eat them.
    # Larger values re-introduce permanent freezes in passages that are
    # geometrically wide enough for the collision radius
    gate_extra: float = 0.06
    rear_extra: float = 0.06
    leave_margin: float = 0.1
    # following that regresses this far past the hit point has wandered
    # off the useful boundary; abandoning it re-arms the leave rule at
    # the larger distance
    regress_margin: float = 3.0
    stuck_ticks: int = 1200
    relax_after: int = 200


def planner_params_for(variant: str, base: PlannerParams | None = None) -> PlannerParams:
    """Parameter set for a named planner variant."""
    params = base if base is not None else PlannerParams()
    if variant == VARIANT_PROPOSED:
        return replace(params, variant=variant, force_p_self=None, zero_neighbor_weights=False)
    if variant == VARIANT_BUG_LEFT:
        return replace(params, variant=variant, force_p_self=1.0, zero_neighbor_weights=True)
    if variant == VARIANT_BUG_RIGHT:
        return replace(params, variant=variant, force_p_self=0.0, zero_neighbor_weights=True)
    raise ValueError(f"unknown planner variant {variant!r}")


@dataclass(frozen=True)
class InboxMessage:
    """Decoded neighbor observation plus where it was sent from."""

    obs: object
    sender_x: float
    sender_y: float
    distance: float


@dataclass
class Action:
    kind: str  # "rotate" | "advance"
    value: float  # signed angle (rad) or step length (m)


def compute_fusion(state, scan, inbox, goal, model, cfg, bank, params):
    """Fused turn-left probability for an encounter at the current pose."""
    if params.force_p_self is not None:
        ps = params.force_p_self
    else:
        own = compress(scan, bank, sender_id=state.id)
        ps = p_self(quadrant_areas(own, model))
    readings = []
    if not params.zero_neighbor_weights:
        for msg in inbox:
            bearing = wrap_angle(
                math.atan2(msg.sender_y - state.y, msg.sender_x - state.x) - state.heading
            )
            quad = classify_quadrant(bearing, model)
            if quad in (QUADRANT_I, QUADRANT_II):
                side = SIDE_LEFT
            elif quad in (QUADRANT_III, QUADRANT_IV):
                side = SIDE_RIGHT
            else:
                side = "behind"
            target = wrap_angle(
                math.atan2(goal[1] - msg.sender_y, goal[0] - msg.sender_x)
                - msg.obs.sender_heading
            )
            readings.append(
                NeighborReading(
                    sender_id=msg.obs.sender_id,
                    side=side,
                    p_i=p_neighbor(msg.obs, model, cfg, target),
                    distance=msg.distance,
                )
            )
    return fuse(ps, readings, model, cfg)


def _advance_clear(state, scan, model, cfg, params, step, direction=0.0):
    """True when a straight step along ``direction`` cannot cause a collision.

    ``direction`` is relative to the current heading.  Returns ahead of
    the motion must clear the swept segment by the collision radius plus
    ``gate_extra``.  Returns at or behind the perpendicular keep their
    distance during the step, so they only need ``rear_extra``; without
    that relaxation two robots that drifted close would veto every
    direction for each other and freeze permanently.

    A return already inside its margin only vetoes directions that close
    on it.  Skimming a convex surface can shave a millimetre under the
    margin (the chord of the step dips below the tangent clearance, and
    the arc just past the limb is hidden at commit time), and an
    absolute test would then reject every direction forever.
    """
    mask = (~blind_mask(cfg)) & (scan.samples < 1.0 - 1e-12)
    if not mask.any():
        return True
    rel = np.flatnonzero(mask) * cfg.angular_resolution
    d = scan.samples[mask] * cfg.range_max
    # coordinates relative to the robot, motion along +x
    px = d * np.cos(rel - direction)
    py = d * np.sin(rel - direction)
    near = d < model.r0 + min(params.gate_extra, params.rear_extra)
    if near.any() and (px[near] > 0.5 * step).any():
        # px <= step/2 leaves the return no nearer after the step
        return False
    front = (px > 0.0) & ~near
    if front.any():
        fx = px[front]
        fy = py[front]
        t = np.minimum(np.maximum(fx / step, 0.0), 1.0) * step
        seg_d2 = (fx - t) ** 2 + fy**2
        bar = model.r0 + params.gate_extra
        if seg_d2.min() < bar * bar:
            return False
    rear = ~front & ~near
    if rear.any():
        bar = model.r0 + params.rear_extra
        if (d[rear] ** 2).min() < bar * bar:
            return False
    return True


# a throat found impassable stays remembered this many ticks, and only
# bends route choice while it is near enough to matter
_AVOID_TTL = 400
_AVOID_RANGE = 1.5


def _tick_avoids(state):
    """Age the impassable-throat memory; spent entries drop out."""
    if state.avoids:
        state.avoids = [(x, y, ttl - 1) for x, y, ttl in state.avoids if ttl > 1]


def _push_avoid(state, x, y):
    """Remember a throat; two slots, oldest evicted."""
    state.avoids = (state.avoids + [(x, y, _AVOID_TTL)])[-2:]


def _avoid_cones(state):
    """Relative (center, half_width) cones toward nearby remembered throats.

    The anchor is a world point, not a bearing: a bearing memorized at the
    throat would swing onto open space as soon as the robot moved, so the
    cone is re-aimed from the current pose and widens as the point nears.
    """
    cones = []
    for x, y, _ in state.avoids:
        dx = x - state.x
        dy = y - state.y
        d = math.hypot(dx, dy)
        if d > _AVOID_RANGE:
            continue
        half = min(0.65, max(0.25, math.atan2(0.45, d)))
        cones.append((wrap_angle(math.atan2(dy, dx) - state.heading), half))
    return cones


def _in_cones(angle, cones):
    return any(abs(wrap_angle(angle - c)) <= w for c, w in cones)


def _carve(safe, cones):
    """Copy of a safe set with the remembered-throat cones removed."""
    if not cones or safe.empty:
        return safe
    intervals = list(safe.intervals)
    for center, half in cones:
        out = []
        for interval in intervals:
            pieces = [interval]
            # intervals crossing the rear seam run past pi, so the cone
            # is applied at each unwrapped image that can overlap
            for c in (center - math.tau, center, center + math.tau):
                lo, hi = c - half, c + half
                nxt = []
                for a, b in pieces:
                    if hi <= a or lo >= b:
                        nxt.append((a, b))
                        continue
                    if a < lo:
                        nxt.append((a, lo))
                    if hi < b:
                        nxt.append((hi, b))
                pieces = nxt
            out.extend(p for p in pieces if p[1] - p[0] > 1e-9)
        intervals = out
    return SafeDirections(intervals, safe.scale)


def _retreat(state, scan, model, cfg, params, block_rel):
    """Back out through the rear when nothing certified is passable.

    A sub-threshold pinch holds the robot exactly where its last legal
    step left it, so the only passable bearings can sit inside the rear
    blind wedge; the stretch just walked is the one piece of space known
    to be traversable, and the clearance gate still vets the move with
    every visible return.  The blocking throat goes into the avoid
    memory so the follow routes around it instead of funneling straight
    back in; a transient blockage (crowding) is not memorized, which the
    stall counter distinguishes from a throat worth remembering.
    """
    for off in (0.0, 0.09, -0.09, 0.17, -0.17, 0.26, -0.26):
        cand = wrap_angle(math.pi + off)
        if not _advance_clear(state, scan, model, cfg, params, state.step_length, cand):
            continue
        if block_rel is not None and state.stuck_count >= params.relax_after:
            bearing = state.heading + block_rel
            _push_avoid(
                state,
                state.x + 0.35 * math.cos(bearing),
                state.y + 0.35 * math.sin(bearing),
            )
        state.esc_dir = wrap_angle(state.heading + cand)
        action = _steer_or_advance(state, scan, model, cfg, params, cand)
        if action is not None:
            return action
        state.esc_dir = math.nan
    return None


def _side_edge(safe, rel_goal, side, min_width=0.0, goal_wins=True):
    """First safe bearing rotating from the goal bearing toward ``side``.

    ``side`` is +1 to sweep counterclockwise (follow left), -1 for
    clockwise.  With ``goal_wins`` the goal bearing itself wins when it
    is already safe; otherwise a certified goal bearing steers to the
    flank edge of its own interval instead, because a set certified at a
    reduced threshold exists to keep the boundary walk alive, and
    beelining on its say-so aims the robot back at whatever throat
    stalled it.  Blocked bearings get the entering edge of the first
    interval reached by the sweep, nudged just inside so containment is
    not boundary-sensitive.  None when nothing is safe.  Intervals
    narrower than ``min_width`` are not worth steering at: one or two
    passing windows out of a failing run flicker with ray re-sampling,
    and one of them rides the blind-arc cap whenever clutter reaches the
    rear seam.
    """
    if safe.empty:
        return None
    best = None
    best_off = math.inf
    for start, end in safe.intervals:
        width = end - start
        if ((rel_goal - start) % math.tau) <= width + 1e-12:
            if goal_wins:
                return wrap_angle(rel_goal)
            # hug the flank being followed: the wall a left follow is
            # rounding lies clockwise of the goal bearing
            inset = min(0.02, 0.5 * width)
            return wrap_angle(start + inset if side > 0 else end - inset)
        if width < min_width:
            continue
        inset = min(0.02, 0.5 * width)
        if side > 0:
            off = (start - rel_goal) % math.tau
            edge = start + inset
        else:
            off = (rel_goal - end) % math.tau
            edge = end - inset
        if off < best_off:
            best_off = off
            best = edge
    return None if best is None else wrap_angle(best)


def step_planner(state, scan: Scan, inbox, goal, model: ProtectiveModel, bank: FilterBank, params: PlannerParams):
    """One planning step; mutates the robot's mode bookkeeping.

    Returns the action to apply this tick: an in-place rotation (bounded
    by the turn rate elsewhere) or a straight advance of one step.
    """
    cfg = scan.cfg
    dx = goal[0] - state.x
    dy = goal[1] - state.y
    dist_goal = math.hypot(dx, dy)
    rel_goal = wrap_angle(math.atan2(dy, dx) - state.heading)
    safe = extract_safe_directions(scan, model, bank)
    _tick_avoids(state)
    cones = _avoid_cones(state)

    if state.mode != MODE_TO_GOAL and dist_goal > state.hit_dist + params.regress_margin:
        # the follow has wandered far past the hit point (wrong side of a
        # large structure, or dragged along by another robot); abandon it
        # and re-plan, which re-arms the leave rule at the larger distance
        state.mode = MODE_TO_GOAL
        state.esc_dir = math.nan

    if state.mode == MODE_TO_GOAL:
        target = safe.closest_direction(rel_goal)
        if target is not None and abs(wrap_angle(target - rel_goal)) > 0.5 * math.pi:
            target = None
        if target is not None and _in_cones(target, cones):
            target = None
        if target is None:
            _enter_boundary_follow(state, scan, inbox, goal, model, cfg, bank, params, dist_goal)
        else:
            action = _steer_or_advance(state, scan, model, cfg, params, target)
            if action is not None:
                return action
            _enter_boundary_follow(state, scan, inbox, goal, model, cfg, bank, params, dist_goal)

    # boundary following (possibly just entered)
    if (
        dist_goal < state.hit_dist - params.leave_margin
        and safe.contains(rel_goal)
        and not _in_cones(rel_goal, cones)
    ):
        state.mode = MODE_TO_GOAL
        state.esc_dir = math.nan
        action = _steer_or_advance(state, scan, model, cfg, params, rel_goal)
        if action is not None:
            return action
        _enter_boundary_follow(state, scan, inbox, goal, model, cfg, bank, params, dist_goal)

    _update_stuck(state, dist_goal, params)
    side = 1.0 if state.mode == MODE_BF_LEFT else -1.0
    # a pocket can hold a non-empty safe set whose every direction cycles
    # in place when the only exits run through sub-threshold gaps, so the
    # follow threshold steps down on stalled progress (and when the set is
    # empty outright); the advance gate still vetoes real collision risk
    fracs = (1.0, 0.5, 0.25)
    level = min(state.stuck_count // params.relax_after, len(fracs) - 1)
    follow = safe
    if level > 0:
        follow = extract_safe_directions(
            scan, replace(model, l_th=model.l_th * fracs[level]), bank
        )
    follow = _carve(follow, cones)
    if not math.isnan(state.esc_dir):
        # a committed detour stays in force until one step lands or it
        # blocks; re-deriving the steering target every tick while still
        # rotating toward this one would limit-cycle in place
        rel_esc = wrap_angle(state.esc_dir - state.heading)
        action = _steer_or_advance(state, scan, model, cfg, params, rel_esc)
        if action is not None:
            if action.kind == "advance":
                state.esc_dir = math.nan
            return action
        # blocked at alignment (a marginal return drifts in and out of
        # the corridor as the rays re-sample with heading): resume the
        # sweep past the failed direction; restarting from the goal side
        # would re-commit the same direction with the same outcome
        state.esc_dir = math.nan
        if state.stuck_count >= params.relax_after:
            # the gate just refused a direction the robot finished
            # turning to while already stalled: that is the throat
            # itself, worth remembering before the sweep moves on
            bearing = state.heading + rel_esc
            _push_avoid(state, state.x + 0.35 * math.cos(bearing),
                        state.y + 0.35 * math.sin(bearing))
            cones = _avoid_cones(state)
            follow = _carve(follow, cones)
        action = _sweep_commit(state, scan, follow, model, cfg, params, rel_esc, side)
        if action is not None:
            return action
    noise_width = 1.5 * cfg.angular_resolution
    desired = _side_edge(follow, rel_goal, side, noise_width, goal_wins=level == 0)
    usable = follow
    if desired is None:
        for frac in fracs[level + 1 :]:
            relaxed = _carve(
                extract_safe_directions(
                    scan, replace(model, l_th=model.l_th * frac), bank
                ),
                cones,
            )
            desired = _side_edge(relaxed, rel_goal, side, noise_width, goal_wins=False)
            if desired is not None:
                usable = relaxed
                break
    if desired is None:
        # nothing certified anywhere; back out if even the rear is
        # passable, else keep turning until motion around us frees a
        # direction
        action = _retreat(state, scan, model, cfg, params, None)
        if action is not None:
            return action
        return Action("rotate", side * math.pi)
    action = _steer_or_advance(state, scan, model, cfg, params, desired)
    if action is not None:
        if action.kind == "rotate":
            # hold the bearing in the world frame while turning; interval
            # edges can sit on the blind-arc cap, which turns with us, so
            # re-deriving the target every tick would chase it forever
            state.esc_dir = wrap_angle(state.heading + desired)
        return action
    # the edge itself fails the gate (a crossing robot, or clutter just
    # outside the safe cone): commit to the nearest passable safe
    # direction further around
    action = _sweep_commit(state, scan, usable, model, cfg, params, desired, side)
    if action is not None:
        return action
    action = _retreat(state, scan, model, cfg, params, desired)
    if action is not None:
        return action
    return Action("rotate", side * math.pi)


def _sweep_commit(state, scan, safe, model, cfg, params, origin, side):
    """Commit to the first passable safe direction side-ward of origin.

    Candidates are the edges and centers of the safe intervals themselves,
    ordered by angular distance from ``origin`` in the follow direction and
    wrapping the whole circle: fixed-step sampling skips intervals narrower
    than the step, and a sweep capped to one side parks the robot for good
    when the only way out of a pocket lies behind it.  Keeping the follow
    side first preserves the fused turn decision everywhere it can be
    honored.
    """
    cands = []
    for start, end in safe.intervals:
        inset = min(0.02, 0.5 * (end - start))
        for cand in (start + inset, 0.5 * (start + end), end - inset):
            dist = (side * (cand - origin)) % (2.0 * math.pi)
            if dist > 0.05:
                cands.append((dist, wrap_angle(cand)))
    for _, cand in sorted(cands):
        if _advance_clear(state, scan, model, cfg, params, state.step_length, cand):
            state.esc_dir = wrap_angle(state.heading + cand)
            action = _steer_or_advance(state, scan, model, cfg, params, cand)
            if action is not None:
                return action
            state.esc_dir = math.nan
    return None


def _enter_boundary_follow(state, scan, inbox, goal, model, cfg, bank, params, dist_goal):
    fused = compute_fusion(state, scan, inbox, goal, model, cfg, bank, params)
    side = decide_side(fused.p)
    state.mode = MODE_BF_LEFT if side == SIDE_LEFT else MODE_BF_RIGHT
    state.hit_dist = dist_goal
    state.last_p = fused.p
    state.stuck_count = 0
    state.best_dist = dist_goal
    state.esc_dir = math.nan


def _update_stuck(state, dist_goal, params):
    """Swap the follow side if no progress for a long while (liveness
    guardrail shared by every variant, distinct from the turn decision).

    Progress under one commanded step is jitter: a robot bouncing on a
    pocket lip creeps closer by millimetres, and crediting that would
    hold the counter (and the threshold relaxation keyed to it) at zero
    forever.
    """
    if dist_goal < state.best_dist - state.step_length:
        state.best_dist = dist_goal
        state.stuck_count = 0
        return
    state.stuck_count += 1
    if state.stuck_count >= params.stuck_ticks:
        # keep hit_dist: shrinking the leave budget here is what turns a
        # hard pocket into a permanent orbit
        state.mode = MODE_BF_RIGHT if state.mode == MODE_BF_LEFT else MODE_BF_LEFT
        state.stuck_count = 0
        state.best_dist = dist_goal


def _steer_or_advance(state, scan, model, cfg, params, desired_rel):
    """Rotate toward the desired relative heading, or advance along it.

    Returns None when aligned but the path ahead fails the clearance gate,
    letting the caller pick the fallback.  The advance moves along the
    current heading, so within the coarse tolerance a blocked gate first
    closes the remaining heading error: the caller certified the desired
    direction, not whatever the heading happens to be.
    """
    if abs(desired_rel) > params.heading_tol:
        return Action("rotate", desired_rel)
    if _advance_clear(state, scan, model, cfg, params, state.step_length):
        return Action("advance", state.step_length)
    if abs(desired_rel) > 0.01:
        return Action("rotate", desired_rel)
    return None
