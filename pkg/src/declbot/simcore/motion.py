"""Differential-drive kinematics and collision resolution."""

from __future__ import annotations

import math

import numpy as np

from ..engine.values import is_number
from .geometry import normalize_angle, point_vs_segments
from .world import PhysicsConfig, World, restricted_circles, static_segments

Pose = tuple[float, float, float]

_COLLISION_SEARCH_ITERATIONS = 8


def sanitize_engines(desire: dict, physics: PhysicsConfig) -> tuple[float, float, bool]:
    """Engine values with non-finite or missing entries zeroed; the flag
    reports whether anything was replaced."""
    out = []
    replaced = False
    for field in ("left_engine", "right_engine"):
        v = desire.get(field) if isinstance(desire, dict) else None
        if not is_number(v) or not math.isfinite(v):
            v = 0.0
            replaced = True
        out.append(float(v))
    return out[0], out[1], replaced


def integrate_motion(pose: Pose, desire: dict, physics: PhysicsConfig) -> Pose:
    """One dt of differential drive. right > left turns counter-clockwise
    (to the robot's left); displacement uses the midpoint heading."""
    left, right, _ = sanitize_engines(desire, physics)
    limit = physics.engine_limit
    left = min(max(left, -limit), limit)
    right = min(max(right, -limit), limit)
    x, y, heading = pose
    s_l = physics.v_max * left
    s_r = physics.v_max * right
    v = (s_l + s_r) / 2.0
    omega = (s_r - s_l) / physics.axle_width
    new_heading = normalize_angle(heading + omega * physics.dt)
    mid = heading + omega * physics.dt / 2.0
    return (
        x + v * physics.dt * math.cos(mid),
        y + v * physics.dt * math.sin(mid),
        new_heading,
    )


def _violations(
    world: World,
    p: tuple[float, float],
    moving_robot: str,
    positions: dict[str, tuple[float, float]],
) -> frozenset:
    """Constraint identifiers violated by the moving robot's disc at p."""
    r = world.physics.robot_radius
    width, height = world.bounds
    out = set()
    x, y = p
    if x < r or x > width - r or y < r or y > height - r:
        out.add("bounds")
    seg_a, seg_b = static_segments(world)
    n_walls = len(world.walls)
    if n_walls:
        d = point_vs_segments(np.array(p, dtype=float), seg_a[:n_walls], seg_b[:n_walls])
        for i in np.nonzero(d < r)[0]:
            out.add(("wall", int(i)))
    areas, centers, radii = restricted_circles(world)
    for i, area in enumerate(areas):
        dx = x - centers[i, 0]
        dy = y - centers[i, 1]
        if math.hypot(dx, dy) < radii[i] + r:
            out.add(("area", area.id))
    for name, (ox, oy) in positions.items():
        if name == moving_robot:
            continue
        if math.hypot(x - ox, y - oy) < 2.0 * r:
            out.add(("robot", name))
    return frozenset(out)


def pose_is_free(
    world: World,
    name: str,
    x: float,
    y: float,
    positions: dict[str, tuple[float, float]] | None = None,
) -> bool:
    if positions is None:
        positions = {r.name: (r.x, r.y) for r in world.robots}
    return not _violations(world, (x, y), name, positions)


def resolve_collision(
    world: World,
    old_pose: Pose,
    tentative_pose: Pose,
    moving_robot: str,
    positions: dict[str, tuple[float, float]] | None = None,
) -> Pose:
    """Rotation is always applied; translation is scaled back by binary
    search to the largest collision-free fraction of the move.

    `positions` holds every other robot's disc center for this move (robots
    that already moved this round at their new spots, the rest at their
    pre-round spots). Constraints already violated at the start pose are
    exempt, so a robot overlapped by a newly restricted area can still
    drive out of it.
    """
    if positions is None:
        positions = {r.name: (r.x, r.y) for r in world.robots}
    ox, oy, _ = old_pose
    tx, ty, heading = tentative_pose
    dx, dy = tx - ox, ty - oy
    if dx == 0.0 and dy == 0.0:
        return (ox, oy, heading)

    exempt = _violations(world, (ox, oy), moving_robot, positions)

    def free(t: float) -> bool:
        p = (ox + t * dx, oy + t * dy)
        return _violations(world, p, moving_robot, positions) <= exempt

    if free(1.0):
        return (tx, ty, heading)
    lo, hi = 0.0, 1.0
    for _ in range(_COLLISION_SEARCH_ITERATIONS):
        mid = (lo + hi) / 2.0
        if free(mid):
            lo = mid
        else:
            hi = mid
    return (ox + lo * dx, oy + lo * dy, heading)
