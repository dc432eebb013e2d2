#!/usr/bin/env python3
"""Re-run every builtin bundle and print the EXPECTATIONS dict to paste into
scenarios/library.py after any change to levels, programs, or geometry."""

from __future__ import annotations

from declbot.engine import compile_program
from declbot.rulelang import parse_program
from declbot.scenarios import BUILTIN_LEVEL_NAMES, build_world, load_bundle
from declbot.simcore import run_world


def main():
    print("EXPECTATIONS = {")
    for name in BUILTIN_LEVEL_NAMES:
        bundle = load_bundle(name)
        program = compile_program(parse_program(bundle.program_source))
        world = build_world(bundle.level)
        for world, _ in run_world(world, program):
            pass
        if world.status == "won":
            print(f'    "{name}": {{"win_by_step": {world.win_step}}},')
        else:
            print(f'    "{name}": None,  # {world.status} at {world.step}')
    print("}")


if __name__ == "__main__":
    main()
