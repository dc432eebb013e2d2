"""Vectorized 2D primitives for ray casting and disc collision checks.

All routines are pure numpy float64; given identical inputs they produce
bit-identical outputs, which the simulator's determinism contract relies on.
"""

from __future__ import annotations

import math

import numpy as np

TAU = 2.0 * math.pi


def normalize_angle(angle: float) -> float:
    """Map to (-pi, pi]."""
    a = math.remainder(angle, TAU)
    if a <= -math.pi:
        a += TAU
    return a


def ray_directions(angles: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(angles), np.sin(angles)], axis=-1)


def rays_vs_segments(
    origin: np.ndarray, dirs: np.ndarray, seg_a: np.ndarray, seg_b: np.ndarray
) -> np.ndarray:
    """Hit parameter t >= 0 for K unit-direction rays against N segments,
    shape (K, N); +inf where there is no hit."""
    if seg_a.shape[0] == 0:
        return np.full((dirs.shape[0], 0), np.inf)
    e = seg_b - seg_a  # (N, 2)
    ao = seg_a - origin  # (N, 2)
    denom = dirs[:, None, 0] * e[None, :, 1] - dirs[:, None, 1] * e[None, :, 0]
    t_num = ao[None, :, 0] * e[None, :, 1] - ao[None, :, 1] * e[None, :, 0]
    s_num = ao[None, :, 0] * dirs[:, None, 1] - ao[None, :, 1] * dirs[:, None, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num / denom
        s = s_num / denom
    valid = (np.abs(denom) > 1e-12) & (s >= 0.0) & (s <= 1.0) & (t >= 0.0)
    return np.where(valid, t, np.inf)


def rays_vs_circles(
    origin: np.ndarray, dirs: np.ndarray, centers: np.ndarray, radii: np.ndarray
) -> np.ndarray:
    """Hit parameter t >= 0 for K rays against M circles, shape (K, M);
    +inf where there is no hit. A ray starting inside a circle passes
    through it (otherwise a robot parked on a beacon would be blinded by
    the beacon's own disc)."""
    if centers.shape[0] == 0:
        return np.full((dirs.shape[0], 0), np.inf)
    f = origin - centers  # (M, 2)
    b = f[None, :, 0] * dirs[:, None, 0] + f[None, :, 1] * dirs[:, None, 1]
    c = (f * f).sum(axis=1) - radii * radii  # (M,)
    disc = b * b - c[None, :]
    sq = np.sqrt(np.maximum(disc, 0.0))
    t1 = -b - sq
    t = np.where(t1 >= 0.0, t1, np.inf)
    return np.where(disc >= 0.0, t, np.inf)


def point_vs_segments(p: np.ndarray, seg_a: np.ndarray, seg_b: np.ndarray) -> np.ndarray:
    """Distance from point p to each of N segments, shape (N,)."""
    if seg_a.shape[0] == 0:
        return np.zeros(0)
    e = seg_b - seg_a
    length_sq = (e * e).sum(axis=1)
    ap = p - seg_a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ap * e).sum(axis=1) / length_sq
    t = np.where(length_sq > 0.0, np.clip(t, 0.0, 1.0), 0.0)
    closest = seg_a + t[:, None] * e
    d = p - closest
    return np.sqrt((d * d).sum(axis=1))


def segments_array(walls) -> tuple[np.ndarray, np.ndarray]:
    """((x1,y1),(x2,y2)) pairs -> (a, b) arrays of shape (N, 2)."""
    if not walls:
        return np.zeros((0, 2)), np.zeros((0, 2))
    a = np.array([w[0] for w in walls], dtype=float)
    b = np.array([w[1] for w in walls], dtype=float)
    return a, b


def bounds_segments(width: float, height: float) -> list:
    return [
        ((0.0, 0.0), (width, 0.0)),
        ((width, 0.0), (width, height)),
        ((width, height), (0.0, height)),
        ((0.0, height), (0.0, 0.0)),
    ]
