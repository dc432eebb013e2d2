"""Canonical per-step trace records and their JSON Lines serialization.

Byte-exactness is part of the contract: fixed top-level key order, record
fields in sorted order inside values, shortest round-trip floats (Python's
repr), compact separators, UTF-8. Non-finite numbers have no strict JSON
form and serialize as null.
"""

from __future__ import annotations

import json
import math
from typing import Optional

from ..engine.values import to_jsonable
from .world import World


def _num(x: float):
    return float(x) if math.isfinite(x) else None


def build_trace_record(world: World, radars: Optional[dict] = None) -> dict:
    robots = []
    for r in world.robots:  # already sorted by name
        entry = {
            "name": r.name,
            "x": _num(r.x),
            "y": _num(r.y),
            "heading": _num(r.heading),
            "desire": to_jsonable(r.last_desire),
            "memory": to_jsonable(r.memory),
        }
        if r.last_error is not None:
            entry["error"] = r.last_error
        if r.last_warning is not None:
            entry["warning"] = r.last_warning
        robots.append(entry)
    record = {
        "step": world.step,
        "robots": robots,
        "areas": [{"id": a.id, "state": a.state} for a in sorted(world.areas, key=lambda a: a.id)],
        "win": world.status == "won" and world.win_step == world.step,
    }
    if radars is not None:
        record["radar"] = {
            name: [to_jsonable(ray.to_value()) for ray in rays]
            for name, rays in sorted(radars.items())
        }
    return record


def serialize_record(record: dict) -> str:
    """One canonical JSON line (no trailing newline)."""
    return json.dumps(record, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def parse_trace(text: str) -> list[dict]:
    """Parse a JSON Lines trace; raises ValueError on corrupt input."""
    records = []
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise ValueError(f"corrupt trace at line {i + 1}: {e}") from None
    return records
