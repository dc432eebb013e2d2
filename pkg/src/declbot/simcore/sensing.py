"""Radar: nearest-hit ray casting against walls, bounds, restricted areas,
beacons, and other robots."""

from __future__ import annotations

import math

import numpy as np

from .geometry import TAU, ray_directions, rays_vs_circles, rays_vs_segments
from .world import (
    RadarRay,
    World,
    beacon_circles,
    restricted_circles,
    static_segments,
)

OBJECT_NONE = "none"
OBJECT_WALL = "wall"
OBJECT_BEACON = "beacon"
OBJECT_ROBOT = "robot"


def _cast_batch(
    world: World,
    origin: tuple[float, float],
    abs_angles: np.ndarray,
    max_range: float,
    ignore_robot: str | None,
) -> list[tuple[str, float, str, float, float]]:
    """Nearest hit per ray: (object, distance, label, hit_x, hit_y).

    Target order fixes tie-breaking: walls and bounds, then restricted
    areas, beacons, and other robots.
    """
    o = np.array(origin, dtype=float)
    dirs = ray_directions(abs_angles)

    seg_a, seg_b = static_segments(world)
    t_all = [rays_vs_segments(o, dirs, seg_a, seg_b)]
    metas: list[tuple[str, str]] = [(OBJECT_WALL, "")] * seg_a.shape[0]

    areas, a_centers, a_radii = restricted_circles(world)
    b_centers, b_radii = beacon_circles(world)
    others = [r for r in world.robots if r.name != ignore_robot]
    if others:
        r_centers = np.array([(r.x, r.y) for r in others], dtype=float)
        r_radii = np.full(len(others), world.physics.robot_radius)
    else:
        r_centers = np.zeros((0, 2))
        r_radii = np.zeros(0)

    centers = np.concatenate([a_centers, b_centers, r_centers])
    radii = np.concatenate([a_radii, b_radii, r_radii])
    t_all.append(rays_vs_circles(o, dirs, centers, radii))
    metas += [(OBJECT_WALL, a.id) for a in areas]
    metas += [(OBJECT_BEACON, b.label) for b in world.beacons]
    metas += [(OBJECT_ROBOT, r.name) for r in others]

    t = np.concatenate(t_all, axis=1)
    hits = []
    if t.shape[1] == 0:
        for k in range(dirs.shape[0]):
            hx = origin[0] + max_range * dirs[k, 0]
            hy = origin[1] + max_range * dirs[k, 1]
            hits.append((OBJECT_NONE, max_range, "", hx, hy))
        return hits

    best = np.argmin(t, axis=1)
    for k in range(dirs.shape[0]):
        dist = t[k, best[k]]
        if dist > max_range:
            hx = origin[0] + max_range * dirs[k, 0]
            hy = origin[1] + max_range * dirs[k, 1]
            hits.append((OBJECT_NONE, max_range, "", hx, hy))
        else:
            obj, label = metas[best[k]]
            hx = origin[0] + dist * dirs[k, 0]
            hy = origin[1] + dist * dirs[k, 1]
            hits.append((obj, float(dist), label, hx, hy))
    return hits


def cast_ray(
    world: World,
    origin: tuple[float, float],
    absolute_angle: float,
    max_range: float,
    ignore_robot: str | None = None,
) -> RadarRay:
    """Single-ray cast; the returned `angle` is the absolute angle."""
    (obj, dist, label, hx, hy) = _cast_batch(
        world, origin, np.array([absolute_angle], dtype=float), max_range, ignore_robot
    )[0]
    return RadarRay(absolute_angle, dist, obj, label, hx, hy)


def relative_ray_angles(ray_count: int) -> list[float]:
    """Half-step-offset fan, symmetric about the heading."""
    step = TAU / ray_count
    return [-math.pi + (k + 0.5) * step for k in range(ray_count)]


def compute_radar(world: World, robot) -> list[RadarRay]:
    """All rays for one robot against the current world, own disc ignored."""
    rel = relative_ray_angles(world.sensor.ray_count)
    abs_angles = np.array([robot.heading + a for a in rel], dtype=float)
    hits = _cast_batch(world, (robot.x, robot.y), abs_angles, world.sensor.range, robot.name)
    return [
        RadarRay(rel[k], hits[k][1], hits[k][0], hits[k][2], hits[k][3], hits[k][4])
        for k in range(len(rel))
    ]
