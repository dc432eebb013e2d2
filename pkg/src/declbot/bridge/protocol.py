"""Wire payload builders for the control service.

Message schemas are documented field-by-field in docs/protocol.md. The
`state` payload is a superset of the trace record: it adds world geometry
and radar rays with hit points so the cockpit can render without ever
simulating locally.
"""

from __future__ import annotations

from typing import Optional

from ..engine.values import to_jsonable
from ..simcore import RadarRay, World, compute_radar


def state_payload(world: World, revision: int) -> dict:
    """Full world snapshot at the robots' current poses."""
    radar: dict[str, list[dict]] = {}
    for robot in world.robots:
        rays = compute_radar(world, robot)
        radar[robot.name] = [
            {
                "angle": ray.angle,
                "distance": ray.distance,
                "object": ray.object,
                "label": ray.label,
                "hit": [ray.hit_x, ray.hit_y],
            }
            for ray in rays
        ]
    robots = []
    for r in world.robots:
        entry = {
            "name": r.name,
            "x": r.x,
            "y": r.y,
            "heading": r.heading,
            "desire": to_jsonable(r.last_desire),
            "memory": to_jsonable(r.memory),
        }
        if r.last_error is not None:
            entry["error"] = r.last_error
        if r.last_warning is not None:
            entry["warning"] = r.last_warning
        robots.append(entry)
    return {
        "revision": revision,
        "step": world.step,
        "status": world.status,
        "win": world.status == "won",
        "win_step": world.win_step,
        "bounds": {"width": world.bounds[0], "height": world.bounds[1]},
        "walls": [[[a[0], a[1]], [b[0], b[1]]] for a, b in world.walls],
        "beacons": [{"label": b.label, "x": b.x, "y": b.y} for b in world.beacons],
        "areas": [
            {
                "id": a.id,
                "center": [a.center[0], a.center[1]],
                "radius": a.radius,
                "state": a.state,
                "color": a.color,
                "trigger_beacon": a.trigger_beacon,
            }
            for a in sorted(world.areas, key=lambda a: a.id)
        ],
        "win_zones": [
            {
                "center": [w.zone_center[0], w.zone_center[1]],
                "radius": w.zone_radius,
                "robots": "all" if w.robots == "all" else list(w.robots),
            }
            for w in world.win_conditions
        ],
        "robots": robots,
        "radar": radar,
        "sensor": {
            "ray_count": world.sensor.ray_count,
            "range": world.sensor.range,
            "beacon_radius": world.sensor.beacon_radius,
        },
        "robot_radius": world.physics.robot_radius,
    }


def state_message(world: World, revision: int) -> dict:
    return {"type": "state", "payload": state_payload(world, revision)}


def error_message(
    stage: str, message: str, line: Optional[int] = None, column: Optional[int] = None
) -> dict:
    msg: dict = {"type": "error", "stage": stage, "message": message}
    if line is not None:
        msg["line"] = line
    if column is not None:
        msg["column"] = column
    return msg


def diagnostics_message(diagnostics) -> dict:
    return {
        "type": "diagnostics",
        "items": [
            {
                "severity": d.severity,
                "message": d.message,
                "line": d.line,
                "column": d.column,
            }
            for d in diagnostics
        ],
    }


def win_message(step: int) -> dict:
    return {"type": "win", "step": step}


def inspect_result_message(robot: str, predicate: str, rows: list) -> dict:
    return {
        "type": "inspect_result",
        "robot": robot,
        "predicate": predicate,
        "rows": [to_jsonable(row) for row in rows],
    }
