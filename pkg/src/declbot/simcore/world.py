"""World model: entities, configuration, and construction."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from ..engine.values import Value
from .geometry import bounds_segments, segments_array

STATUS_RUNNING = "running"
STATUS_WON = "won"
STATUS_STEP_LIMIT = "step_limit_reached"

MODE_WHILE_DETECTED = "while_detected"
MODE_LATCH_TOGGLE = "latch_toggle"

STATE_ACCESSIBLE = "accessible"
STATE_RESTRICTED = "restricted"

WIN_ALL = "all"

Segment = tuple[tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class PhysicsConfig:
    v_max: float = 1.0
    axle_width: float = 0.5
    dt: float = 0.1
    robot_radius: float = 0.25
    engine_limit: float = 1.0


@dataclass(frozen=True)
class SensorConfig:
    ray_count: int = 16
    range: float = 6.0
    beacon_radius: float = 0.2


@dataclass(frozen=True)
class Beacon:
    label: str
    x: float
    y: float


@dataclass(frozen=True)
class Area:
    id: str
    center: tuple[float, float]
    radius: float
    trigger_beacon: str
    mode: str = MODE_WHILE_DETECTED
    state: str = STATE_RESTRICTED
    color: str = "red"
    last_detected: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class WinCondition:
    zone_center: tuple[float, float]
    zone_radius: float
    robots: Union[str, tuple[str, ...]]  # WIN_ALL or explicit names


@dataclass(frozen=True)
class RobotState:
    name: str
    x: float
    y: float
    heading: float  # radians in (-pi, pi]
    memory: Value = None
    last_desire: dict = field(default_factory=lambda: {"left_engine": 0.0, "right_engine": 0.0})
    last_error: Optional[str] = None
    last_warning: Optional[str] = None


@dataclass(frozen=True)
class RadarRay:
    angle: float  # relative to robot heading
    distance: float
    object: str  # "beacon" | "wall" | "robot" | "none"
    label: str
    hit_x: float
    hit_y: float

    def to_value(self) -> dict:
        return {
            "angle": self.angle,
            "distance": self.distance,
            "object": self.object,
            "label": self.label,
        }


MemoryAccess = Union[str, dict[str, tuple[str, ...]]]  # "own" | "all" | name -> readable


@dataclass(frozen=True)
class World:
    bounds: tuple[float, float]
    walls: tuple[Segment, ...]
    beacons: tuple[Beacon, ...]
    areas: tuple[Area, ...]
    robots: tuple[RobotState, ...]  # sorted by name
    win_conditions: tuple[WinCondition, ...]
    physics: PhysicsConfig = PhysicsConfig()
    sensor: SensorConfig = SensorConfig()
    memory_access: MemoryAccess = "own"
    max_steps: int = 2000
    step: int = 0
    status: str = STATUS_RUNNING
    win_step: Optional[int] = None

    def robot(self, name: str) -> RobotState:
        for r in self.robots:
            if r.name == name:
                return r
        raise KeyError(name)

    def with_robots(self, robots) -> "World":
        return replace(self, robots=tuple(sorted(robots, key=lambda r: r.name)))


def make_world(
    bounds,
    robots,
    walls=(),
    beacons=(),
    areas=(),
    win_conditions=(),
    physics: PhysicsConfig = PhysicsConfig(),
    sensor: SensorConfig = SensorConfig(),
    memory_access: MemoryAccess = "own",
    max_steps: int = 2000,
) -> World:
    return World(
        bounds=(float(bounds[0]), float(bounds[1])),
        walls=tuple((tuple(map(float, a)), tuple(map(float, b))) for a, b in walls),
        beacons=tuple(beacons),
        areas=tuple(areas),
        robots=tuple(sorted(robots, key=lambda r: r.name)),
        win_conditions=tuple(win_conditions),
        physics=physics,
        sensor=sensor,
        memory_access=memory_access,
        max_steps=max_steps,
    )


# Static segment arrays (walls + arena edges) are shared across the per-step
# world copies, so cache them keyed by the walls tuple and bounds.
_static_cache: dict = {}
_STATIC_CACHE_LIMIT = 64


def static_segments(world: World) -> tuple[np.ndarray, np.ndarray]:
    key = (world.walls, world.bounds)
    hit = _static_cache.get(key)
    if hit is None:
        segs = list(world.walls) + bounds_segments(*world.bounds)
        hit = segments_array(segs)
        if len(_static_cache) >= _STATIC_CACHE_LIMIT:
            _static_cache.clear()
        _static_cache[key] = hit
    return hit


def restricted_circles(world: World) -> tuple[list[Area], np.ndarray, np.ndarray]:
    areas = [a for a in world.areas if a.state == STATE_RESTRICTED]
    if not areas:
        return areas, np.zeros((0, 2)), np.zeros(0)
    centers = np.array([a.center for a in areas], dtype=float)
    radii = np.array([a.radius for a in areas], dtype=float)
    return areas, centers, radii


def beacon_circles(world: World) -> tuple[np.ndarray, np.ndarray]:
    if not world.beacons:
        return np.zeros((0, 2)), np.zeros(0)
    centers = np.array([(b.x, b.y) for b in world.beacons], dtype=float)
    radii = np.full(len(world.beacons), world.sensor.beacon_radius)
    return centers, radii
