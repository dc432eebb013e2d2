"""Builtin scenario bundles: levels paired with reference rule programs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..engine.builtins import edge_distance  # language builtin, re-exported here
from .schema import LevelDocument, load_level

BUILTIN_LEVEL_NAMES = (
    "level01_open_field",
    "level07_station",
    "level08_formation",
    "level10_mapping",
)

# Win steps recorded from one reference run of each bundle (deterministic,
# so reruns land on exactly these steps). level01 has no win condition: it
# demonstrates obstacle avoidance for the full step budget.
EXPECTATIONS: dict[str, Optional[dict]] = {
    "level01_open_field": None,
    "level07_station": {"win_by_step": 300},
    "level08_formation": {"win_by_step": 572},
    "level10_mapping": {"win_by_step": 691},
}


@dataclass(frozen=True)
class ScenarioBundle:
    name: str
    level: LevelDocument
    program_source: str
    expected: Optional[dict] = None


def builtin_levels_dir() -> Path:
    return Path(__file__).parent / "levels"


def load_bundle(name: str, directory: Optional[Path] = None) -> ScenarioBundle:
    base = Path(directory) if directory is not None else builtin_levels_dir()
    level_path = base / f"{name}.level.json"
    program_path = base / f"{name}.lgc"
    level = load_level(level_path.read_text(encoding="utf-8"))
    program_source = program_path.read_text(encoding="utf-8")
    return ScenarioBundle(name, level, program_source, EXPECTATIONS.get(name))


def builtin_scenarios() -> list[ScenarioBundle]:
    return [load_bundle(name) for name in BUILTIN_LEVEL_NAMES]


__all__ = [
    "BUILTIN_LEVEL_NAMES",
    "EXPECTATIONS",
    "ScenarioBundle",
    "builtin_levels_dir",
    "builtin_scenarios",
    "edge_distance",
    "load_bundle",
]
