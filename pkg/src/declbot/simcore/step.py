"""The synchronous round: sense, decide, move, toggle areas, check win."""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Iterator, Optional, Sequence

from ..engine import Decision, Fact, compile_program, run_robot_step
from .motion import integrate_motion, resolve_collision, sanitize_engines
from .sensing import OBJECT_BEACON, RadarRay, compute_radar
from .trace import build_trace_record
from .world import (
    Area,
    MODE_LATCH_TOGGLE,
    MODE_WHILE_DETECTED,
    STATE_ACCESSIBLE,
    STATE_RESTRICTED,
    STATUS_RUNNING,
    STATUS_STEP_LIMIT,
    STATUS_WON,
    WIN_ALL,
    RobotState,
    World,
)


def memory_facts_for(world: World, robot_name: str) -> list[Fact]:
    """Memory rows the robot may read under the level's access policy; its
    own row is always present (null-valued before the first write)."""
    policy = world.memory_access
    if policy == "all":
        readable = [r.name for r in world.robots]
    elif isinstance(policy, dict):
        readable = sorted(set(policy.get(robot_name, ())) | {robot_name})
    else:  # "own"
        readable = [robot_name]
    facts = []
    for name in readable:
        facts.append(Fact("Memory", {"robot_name": name, "memory": world.robot(name).memory}))
    return facts


def sensor_fact_for(world: World, robot_name: str, radar: list[RadarRay]) -> Fact:
    return Fact(
        "Sensor",
        {"robot_name": robot_name, "sensor": {"radar": [ray.to_value() for ray in radar]}},
    )


def update_areas(world: World, all_radars: dict[str, list[RadarRay]]) -> tuple[Area, ...]:
    """New area states from this round's beacon detections. while_detected is
    memoryless; latch_toggle flips on a rising edge of detection."""
    detected_beacons = {
        ray.label
        for rays in all_radars.values()
        for ray in rays
        if ray.object == OBJECT_BEACON
    }
    out = []
    for area in world.areas:
        detected = area.trigger_beacon in detected_beacons
        if area.mode == MODE_WHILE_DETECTED:
            state = STATE_ACCESSIBLE if detected else STATE_RESTRICTED
        elif area.mode == MODE_LATCH_TOGGLE:
            if detected and not area.last_detected:
                state = (
                    STATE_ACCESSIBLE if area.state == STATE_RESTRICTED else STATE_RESTRICTED
                )
            else:
                state = area.state
        else:
            raise ValueError(f"unknown area mode {area.mode!r}")
        out.append(replace(area, state=state, last_detected=detected))
    return tuple(out)


def check_win(world: World) -> bool:
    """True iff every win condition holds this round: each listed robot's
    center strictly inside the zone, simultaneously."""
    if not world.win_conditions:
        return False
    for cond in world.win_conditions:
        names = (
            [r.name for r in world.robots] if cond.robots == WIN_ALL else list(cond.robots)
        )
        cx, cy = cond.zone_center
        for name in names:
            robot = world.robot(name)
            if math.hypot(robot.x - cx, robot.y - cy) >= cond.zone_radius:
                return False
    return True


def step_world(
    world: World,
    program,
    decision_order: Optional[Sequence[str]] = None,
    include_radar: bool = False,
) -> tuple[World, dict]:
    """Advance one synchronous round; returns the new world and its trace
    record. All decisions read the same pre-round snapshot; memory commits
    simultaneously; movement applies in robot-name order.

    `decision_order` only permutes the order decisions are computed in (they
    are independent), never the movement order.
    """
    if world.status != STATUS_RUNNING:
        raise RuntimeError(f"cannot step a world with status {world.status!r}")
    compiled = compile_program(program)

    radars = {r.name: compute_radar(world, r) for r in world.robots}

    names = [r.name for r in world.robots]
    order = list(decision_order) if decision_order is not None else names
    if sorted(order) != sorted(names):
        raise ValueError("decision_order must permute the robot names")
    decisions: dict[str, Decision] = {}
    for name in order:
        decisions[name] = run_robot_step(
            compiled, name, sensor_fact_for(world, name, radars[name]), memory_facts_for(world, name)
        )

    # Move in name order; earlier movers occupy their new spots.
    positions = {r.name: (r.x, r.y) for r in world.robots}
    new_robots: list[RobotState] = []
    for robot in world.robots:
        decision = decisions[robot.name]
        left, right, replaced = sanitize_engines(decision.desire, world.physics)
        desire = dict(decision.desire)
        desire["left_engine"] = left
        desire["right_engine"] = right
        warning = "non-finite desire treated as zero" if replaced else None
        old_pose = (robot.x, robot.y, robot.heading)
        tentative = integrate_motion(old_pose, desire, world.physics)
        x, y, heading = resolve_collision(world, old_pose, tentative, robot.name, positions)
        positions[robot.name] = (x, y)
        new_robots.append(
            RobotState(
                name=robot.name,
                x=x,
                y=y,
                heading=heading,
                memory=decision.memory,
                last_desire=desire,
                last_error=decision.error,
                last_warning=warning,
            )
        )

    new_areas = update_areas(world, radars)
    new_world = replace(
        world, robots=tuple(new_robots), areas=new_areas, step=world.step + 1
    )

    won = check_win(new_world)
    if won:
        new_world = replace(new_world, status=STATUS_WON, win_step=new_world.step)
    elif new_world.step >= new_world.max_steps:
        new_world = replace(new_world, status=STATUS_STEP_LIMIT)

    record = build_trace_record(new_world, radars if include_radar else None)
    return new_world, record


def run_world(
    world: World,
    program,
    max_steps: Optional[int] = None,
    include_radar: bool = False,
) -> Iterator[tuple[World, dict]]:
    """Step until won or the step limit; yields (world, record) per round."""
    if max_steps is not None:
        world = replace(world, max_steps=int(max_steps))
    compiled = compile_program(program)
    while world.status == STATUS_RUNNING:
        world, record = step_world(world, compiled, include_radar=include_radar)
        yield world, record
