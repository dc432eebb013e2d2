"""Level documents: JSON schema, loader/saver, validation, world building.

Level files are JSON with `format_version: 1`. Defaults are filled on load;
`save_level(load_level(t))` is canonical and re-loads to an equal document.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from ..simcore import (
    Area,
    Beacon,
    MODE_LATCH_TOGGLE,
    MODE_WHILE_DETECTED,
    PhysicsConfig,
    RobotState,
    STATE_ACCESSIBLE,
    STATE_RESTRICTED,
    SensorConfig,
    WIN_ALL,
    WinCondition,
    World,
    make_world,
    pose_is_free,
)

FORMAT_VERSION = 1


class LevelError(Exception):
    def __init__(self, errors: Union[str, list[str]]):
        self.errors = [errors] if isinstance(errors, str) else list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class LevelDocument:
    name: str
    bounds: tuple[float, float]
    robots: tuple[RobotState, ...]
    walls: tuple = ()
    beacons: tuple[Beacon, ...] = ()
    areas: tuple[Area, ...] = ()
    win: tuple[WinCondition, ...] = ()
    physics: PhysicsConfig = PhysicsConfig()
    sensor: SensorConfig = SensorConfig()
    memory_access: Union[str, dict] = "own"
    max_steps: int = 2000


def _need(obj: dict, key: str, path: str, errors: list[str]):
    if key not in obj:
        errors.append(f"{path}.{key}: missing required field")
        return None
    return obj[key]


def _number(value, path: str, errors: list[str], positive=False) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        errors.append(f"{path}: expected a number")
        return 0.0
    v = float(value)
    if not math.isfinite(v):
        errors.append(f"{path}: must be finite")
        return 0.0
    if positive and v <= 0:
        errors.append(f"{path}: must be positive")
    return v


def _point(value, path: str, errors: list[str]) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        errors.append(f"{path}: expected [x, y]")
        return (0.0, 0.0)
    return (_number(value[0], f"{path}[0]", errors), _number(value[1], f"{path}[1]", errors))


def _config(cls, defaults, overrides, path: str, errors: list[str], int_fields=()):
    if overrides is None:
        return defaults
    if not isinstance(overrides, dict):
        errors.append(f"{path}: expected an object")
        return defaults
    values = {}
    for key, v in overrides.items():
        if not hasattr(defaults, key):
            errors.append(f"{path}.{key}: unknown field")
            continue
        if key in int_fields:
            if not isinstance(v, int) or isinstance(v, bool):
                errors.append(f"{path}.{key}: expected an integer")
                continue
            values[key] = v
        else:
            values[key] = _number(v, f"{path}.{key}", errors, positive=True)
    return replace(defaults, **values)


def level_from_dict(data: dict) -> LevelDocument:
    """Parse and validate a level dict; raises LevelError listing every
    problem with its field path."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise LevelError("level: expected a JSON object")

    version = data.get("format_version")
    if version != FORMAT_VERSION:
        errors.append(f"format_version: expected {FORMAT_VERSION}, got {version!r}")

    name = data.get("name")
    if not isinstance(name, str) or not name:
        errors.append("name: expected a non-empty string")
        name = "unnamed"

    bounds_obj = _need(data, "bounds", "level", errors) or {}
    width = _number(bounds_obj.get("width", 0), "bounds.width", errors, positive=True)
    height = _number(bounds_obj.get("height", 0), "bounds.height", errors, positive=True)

    physics = _config(PhysicsConfig, PhysicsConfig(), data.get("physics"), "physics", errors)
    sensor = _config(
        SensorConfig, SensorConfig(), data.get("sensor"), "sensor", errors, int_fields=("ray_count",)
    )
    if sensor.ray_count < 4:
        errors.append("sensor.ray_count: must be at least 4")

    walls = []
    for i, w in enumerate(data.get("walls", [])):
        if not isinstance(w, (list, tuple)) or len(w) != 2:
            errors.append(f"walls[{i}]: expected [[x1, y1], [x2, y2]]")
            continue
        walls.append((_point(w[0], f"walls[{i}][0]", errors), _point(w[1], f"walls[{i}][1]", errors)))

    robots = []
    robot_list = data.get("robots")
    if not isinstance(robot_list, list) or not robot_list:
        errors.append("robots: expected a non-empty list")
        robot_list = []
    for i, r in enumerate(robot_list):
        path = f"robots[{i}]"
        if not isinstance(r, dict):
            errors.append(f"{path}: expected an object")
            continue
        rname = r.get("name")
        if not isinstance(rname, str) or not rname:
            errors.append(f"{path}.name: expected a non-empty string")
            rname = f"robot{i}"
        robots.append(
            RobotState(
                name=rname,
                x=_number(_need(r, "x", path, errors), f"{path}.x", errors),
                y=_number(_need(r, "y", path, errors), f"{path}.y", errors),
                heading=_number(r.get("heading", 0.0), f"{path}.heading", errors),
            )
        )

    beacons = []
    for i, b in enumerate(data.get("beacons", [])):
        path = f"beacons[{i}]"
        if not isinstance(b, dict):
            errors.append(f"{path}: expected an object")
            continue
        label = b.get("label")
        if not isinstance(label, str) or not label:
            errors.append(f"{path}.label: expected a non-empty string")
            label = f"beacon{i}"
        beacons.append(
            Beacon(
                label,
                _number(_need(b, "x", path, errors), f"{path}.x", errors),
                _number(_need(b, "y", path, errors), f"{path}.y", errors),
            )
        )

    areas = []
    for i, a in enumerate(data.get("areas", [])):
        path = f"areas[{i}]"
        if not isinstance(a, dict):
            errors.append(f"{path}: expected an object")
            continue
        area_id = a.get("id")
        if not isinstance(area_id, str) or not area_id:
            errors.append(f"{path}.id: expected a non-empty string")
            area_id = f"area{i}"
        mode = a.get("mode", MODE_WHILE_DETECTED)
        if mode not in (MODE_WHILE_DETECTED, MODE_LATCH_TOGGLE):
            errors.append(f"{path}.mode: expected while_detected or latch_toggle")
            mode = MODE_WHILE_DETECTED
        state = a.get("initial_state", STATE_RESTRICTED)
        if state not in (STATE_ACCESSIBLE, STATE_RESTRICTED):
            errors.append(f"{path}.initial_state: expected accessible or restricted")
            state = STATE_RESTRICTED
        trigger = a.get("trigger_beacon")
        if not isinstance(trigger, str) or not trigger:
            errors.append(f"{path}.trigger_beacon: expected a beacon label")
            trigger = ""
        areas.append(
            Area(
                id=area_id,
                center=_point(_need(a, "center", path, errors), f"{path}.center", errors),
                radius=_number(_need(a, "radius", path, errors), f"{path}.radius", errors, positive=True),
                trigger_beacon=trigger,
                mode=mode,
                state=state,
                color=a.get("color", "red") if isinstance(a.get("color", "red"), str) else "red",
            )
        )

    win = []
    for i, w in enumerate(data.get("win", [])):
        path = f"win[{i}]"
        if not isinstance(w, dict):
            errors.append(f"{path}: expected an object")
            continue
        zone = w.get("zone")
        if not isinstance(zone, dict):
            errors.append(f"{path}.zone: expected an object")
            zone = {}
        center = _point(_need(zone, "center", f"{path}.zone", errors), f"{path}.zone.center", errors)
        radius = _number(
            _need(zone, "radius", f"{path}.zone", errors), f"{path}.zone.radius", errors, positive=True
        )
        names = w.get("robots", WIN_ALL)
        if names != WIN_ALL:
            if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
                errors.append(f"{path}.robots: expected \"all\" or a list of robot names")
                names = WIN_ALL
            else:
                names = tuple(names)
        win.append(WinCondition(center, radius, names))

    memory_access = data.get("memory_access", "own")
    if isinstance(memory_access, dict):
        parsed_access = {}
        for k, v in memory_access.items():
            if not isinstance(v, list) or not all(isinstance(n, str) for n in v):
                errors.append(f"memory_access.{k}: expected a list of robot names")
                continue
            parsed_access[k] = tuple(v)
        memory_access = parsed_access
    elif memory_access not in ("own", "all"):
        errors.append('memory_access: expected "own", "all", or a per-robot map')
        memory_access = "own"

    max_steps = data.get("max_steps", 2000)
    if not isinstance(max_steps, int) or isinstance(max_steps, bool) or max_steps <= 0:
        errors.append("max_steps: expected a positive integer")
        max_steps = 2000

    if errors:
        raise LevelError(errors)

    doc = LevelDocument(
        name=name,
        bounds=(width, height),
        robots=tuple(robots),
        walls=tuple(walls),
        beacons=tuple(beacons),
        areas=tuple(areas),
        win=tuple(win),
        physics=physics,
        sensor=sensor,
        memory_access=memory_access,
        max_steps=max_steps,
    )
    semantic = validate_level(doc)
    if semantic:
        raise LevelError(semantic)
    return doc


def validate_level(doc: LevelDocument) -> list[str]:
    """Semantic checks over a structurally valid document."""
    errors: list[str] = []
    width, height = doc.bounds

    names = [r.name for r in doc.robots]
    if len(set(names)) != len(names):
        errors.append("robots: names must be unique")
    labels = [b.label for b in doc.beacons]
    if len(set(labels)) != len(labels):
        errors.append("beacons: labels must be unique")
    ids = [a.id for a in doc.areas]
    if len(set(ids)) != len(ids):
        errors.append("areas: ids must be unique")

    def inside(x, y):
        return 0 <= x <= width and 0 <= y <= height

    for r in doc.robots:
        if not inside(r.x, r.y):
            errors.append(f"robot '{r.name}': position outside bounds")
    for b in doc.beacons:
        if not inside(b.x, b.y):
            errors.append(f"beacon '{b.label}': position outside bounds")
    for a in doc.areas:
        if not inside(*a.center):
            errors.append(f"area '{a.id}': center outside bounds")
        if a.trigger_beacon not in set(labels):
            errors.append(f"area '{a.id}': trigger beacon '{a.trigger_beacon}' does not exist")
    for i, w in enumerate(doc.win):
        if w.robots != WIN_ALL:
            for n in w.robots:
                if n not in names:
                    errors.append(f"win[{i}]: robot '{n}' does not exist")
    if isinstance(doc.memory_access, dict):
        for k, readable in doc.memory_access.items():
            for n in (k, *readable):
                if n not in names:
                    errors.append(f"memory_access: robot '{n}' does not exist")

    if not errors:
        world = build_world(doc)
        for r in doc.robots:
            if not pose_is_free(world, r.name, r.x, r.y):
                errors.append(f"robot '{r.name}': spawn pose collides with an obstacle")
    return errors


def build_world(doc: LevelDocument) -> World:
    return make_world(
        bounds=doc.bounds,
        robots=list(doc.robots),
        walls=list(doc.walls),
        beacons=list(doc.beacons),
        areas=list(doc.areas),
        win_conditions=list(doc.win),
        physics=doc.physics,
        sensor=doc.sensor,
        memory_access=doc.memory_access,
        max_steps=doc.max_steps,
    )


def level_to_dict(doc: LevelDocument) -> dict:
    """Canonical dict form (fixed key order, defaults materialized)."""
    return {
        "format_version": FORMAT_VERSION,
        "name": doc.name,
        "bounds": {"width": doc.bounds[0], "height": doc.bounds[1]},
        "physics": {
            "v_max": doc.physics.v_max,
            "axle_width": doc.physics.axle_width,
            "dt": doc.physics.dt,
            "robot_radius": doc.physics.robot_radius,
            "engine_limit": doc.physics.engine_limit,
        },
        "sensor": {
            "ray_count": doc.sensor.ray_count,
            "range": doc.sensor.range,
            "beacon_radius": doc.sensor.beacon_radius,
        },
        "memory_access": (
            {k: list(v) for k, v in sorted(doc.memory_access.items())}
            if isinstance(doc.memory_access, dict)
            else doc.memory_access
        ),
        "walls": [[[a[0], a[1]], [b[0], b[1]]] for a, b in doc.walls],
        "robots": [
            {"name": r.name, "x": r.x, "y": r.y, "heading": r.heading} for r in doc.robots
        ],
        "beacons": [{"label": b.label, "x": b.x, "y": b.y} for b in doc.beacons],
        "areas": [
            {
                "id": a.id,
                "center": [a.center[0], a.center[1]],
                "radius": a.radius,
                "trigger_beacon": a.trigger_beacon,
                "mode": a.mode,
                "initial_state": a.state,
                "color": a.color,
            }
            for a in doc.areas
        ],
        "win": [
            {
                "zone": {"center": [w.zone_center[0], w.zone_center[1]], "radius": w.zone_radius},
                "robots": "all" if w.robots == WIN_ALL else list(w.robots),
            }
            for w in doc.win
        ],
        "max_steps": doc.max_steps,
    }


def load_level(text: str) -> LevelDocument:
    """Parse level JSON text; raises LevelError with field paths."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise LevelError(f"invalid JSON: {e}") from None
    return level_from_dict(data)


def save_level(doc: LevelDocument) -> str:
    """Canonical JSON text; load_level(save_level(d)) == d."""
    return json.dumps(level_to_dict(doc), indent=2, ensure_ascii=False) + "\n"
