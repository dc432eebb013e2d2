"""Deterministic 2D world: geometry, radar, kinematics, collisions, areas,
win detection, and the synchronous round loop."""

from .geometry import normalize_angle
from .motion import integrate_motion, pose_is_free, resolve_collision, sanitize_engines
from .sensing import (
    OBJECT_BEACON,
    OBJECT_NONE,
    OBJECT_ROBOT,
    OBJECT_WALL,
    cast_ray,
    compute_radar,
    relative_ray_angles,
)
from .step import (
    check_win,
    memory_facts_for,
    run_world,
    sensor_fact_for,
    step_world,
    update_areas,
)
from .trace import build_trace_record, parse_trace, serialize_record
from .world import (
    Area,
    Beacon,
    MODE_LATCH_TOGGLE,
    MODE_WHILE_DETECTED,
    PhysicsConfig,
    RadarRay,
    RobotState,
    STATE_ACCESSIBLE,
    STATE_RESTRICTED,
    STATUS_RUNNING,
    STATUS_STEP_LIMIT,
    STATUS_WON,
    SensorConfig,
    WIN_ALL,
    WinCondition,
    World,
    make_world,
)

__all__ = [
    "Area",
    "Beacon",
    "MODE_LATCH_TOGGLE",
    "MODE_WHILE_DETECTED",
    "OBJECT_BEACON",
    "OBJECT_NONE",
    "OBJECT_ROBOT",
    "OBJECT_WALL",
    "PhysicsConfig",
    "RadarRay",
    "RobotState",
    "STATE_ACCESSIBLE",
    "STATE_RESTRICTED",
    "STATUS_RUNNING",
    "STATUS_STEP_LIMIT",
    "STATUS_WON",
    "SensorConfig",
    "WIN_ALL",
    "WinCondition",
    "World",
    "build_trace_record",
    "cast_ray",
    "check_win",
    "compute_radar",
    "integrate_motion",
    "make_world",
    "memory_facts_for",
    "normalize_angle",
    "parse_trace",
    "pose_is_free",
    "relative_ray_angles",
    "resolve_collision",
    "run_world",
    "sanitize_engines",
    "sensor_fact_for",
    "serialize_record",
    "step_world",
    "update_areas",
]
