"""Level file schema, loader/saver, and the builtin scenario library."""

from .library import (
    BUILTIN_LEVEL_NAMES,
    EXPECTATIONS,
    ScenarioBundle,
    builtin_levels_dir,
    builtin_scenarios,
    edge_distance,
    load_bundle,
)
from .schema import (
    FORMAT_VERSION,
    LevelDocument,
    LevelError,
    build_world,
    level_from_dict,
    level_to_dict,
    load_level,
    save_level,
    validate_level,
)

__all__ = [
    "BUILTIN_LEVEL_NAMES",
    "EXPECTATIONS",
    "FORMAT_VERSION",
    "LevelDocument",
    "LevelError",
    "ScenarioBundle",
    "build_world",
    "builtin_levels_dir",
    "builtin_scenarios",
    "edge_distance",
    "level_from_dict",
    "level_to_dict",
    "load_bundle",
    "load_level",
    "save_level",
    "validate_level",
]
