import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


class BundleRun:
    """One full headless run of a builtin bundle, computed lazily and shared
    across the suite (the simulator is deterministic, so every consumer sees
    the same run)."""

    def __init__(self, name: str):
        from declbot.engine import compile_program
        from declbot.rulelang import parse_program, validate
        from declbot.scenarios import build_world, load_bundle
        from declbot.simcore import run_world, serialize_record

        self.bundle = load_bundle(name)
        program = parse_program(self.bundle.program_source)
        assert validate(program) == []
        self.program = compile_program(program)
        self.worlds = []
        lines = []
        world = build_world(self.bundle.level)
        self.initial_world = world
        for world, record in run_world(world, self.program):
            self.worlds.append(world)
            lines.append(serialize_record(record))
        self.final_world = world
        self.trace = "\n".join(lines) + "\n"


_runs: dict[str, BundleRun] = {}


@pytest.fixture(scope="session")
def bundle_run():
    def get(name: str) -> BundleRun:
        if name not in _runs:
            _runs[name] = BundleRun(name)
        return _runs[name]

    return get
