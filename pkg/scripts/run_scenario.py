#!/usr/bin/env python3
"""Run a builtin scenario headless and report what happened.

Usage: python scripts/run_scenario.py level10_mapping [--steps N] [--watch K]
"""

from __future__ import annotations

import argparse
import math
import time

from declbot.engine import compile_program
from declbot.rulelang import parse_program, validate
from declbot.scenarios import build_world, load_bundle
from declbot.simcore import run_world


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("name")
    ap.add_argument("--steps", type=int, default=None)
    ap.add_argument("--watch", type=int, default=0, help="print a status line every K steps")
    args = ap.parse_args()

    bundle = load_bundle(args.name)
    program = parse_program(bundle.program_source)
    diags = validate(program)
    if diags:
        for d in diags:
            print(d)
        raise SystemExit(2)
    compiled = compile_program(program)
    world = build_world(bundle.level)

    t0 = time.perf_counter()
    final = world
    for final, record in run_world(world, compiled, max_steps=args.steps):
        if args.watch and final.step % args.watch == 0:
            robots = " ".join(
                f"{r.name}({r.x:.1f},{r.y:.1f})" + ("!" if r.last_error else "")
                for r in final.robots
            )
            print(f"step {final.step:4d} {robots}")
            for r in final.robots:
                if r.last_error:
                    print(f"   {r.name} error: {r.last_error}")
    dt = time.perf_counter() - t0

    print(f"status={final.status} steps={final.step} win_step={final.win_step} wall={dt:.2f}s")
    for r in final.robots:
        mem = repr(r.memory)
        if len(mem) > 120:
            mem = mem[:120] + "..."
        print(f"  {r.name}: ({r.x:.2f},{r.y:.2f}) heading={r.heading:.2f} mem={mem}")


if __name__ == "__main__":
    main()
