"""Command-line front end: headless runs, program checking, trace replay
verification, level listing, and serving the control bridge.

Exit codes: 0 success (won or clean step limit), 1 replay divergence,
2 program/level validation failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .engine import compile_program
from .rulelang import LexError, ParseError, parse_program, validate
from .scenarios import LevelError, builtin_levels_dir, load_level
from .simcore import STATUS_WON, run_world, serialize_record
from .scenarios.schema import build_world

EXIT_OK = 0
EXIT_DIVERGED = 1
EXIT_INVALID = 2
EXIT_IO = 3

LEVEL_DIR_ENV = "DECLBOT_LEVEL_DIR"


@dataclass
class RunReport:
    final_status: str
    steps_executed: int
    win_step: Optional[int]
    robot_errors: dict[str, int]
    duration_s: float
    trace_path: Optional[str]

    def print(self, out=None):
        out = out if out is not None else sys.stdout
        print(f"status: {self.final_status}", file=out)
        print(f"steps: {self.steps_executed}", file=out)
        if self.win_step is not None:
            print(f"win_step: {self.win_step}", file=out)
        if self.robot_errors:
            errors = " ".join(f"{n}={c}" for n, c in sorted(self.robot_errors.items()))
        else:
            errors = "none"
        print(f"robot_errors: {errors}", file=out)
        print(f"duration_s: {self.duration_s:.3f}", file=out)
        if self.trace_path:
            print(f"trace: {self.trace_path}", file=out)


def level_search_dirs() -> list[Path]:
    dirs = []
    override = os.environ.get(LEVEL_DIR_ENV)
    if override:
        dirs.append(Path(override))
    dirs.append(builtin_levels_dir())
    return dirs


def _resolve_level_path(spec: str) -> Path:
    p = Path(spec)
    if p.exists():
        return p
    for base in level_search_dirs():
        candidate = base / f"{spec}.level.json"
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"level {spec!r}: not a file and not a known level name")


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _load_level_arg(spec: str):
    path = _resolve_level_path(spec)
    return load_level(_read(path)), path


def _load_program_file(path_str: str):
    text = _read(Path(path_str))
    program = parse_program(text)
    return program, validate(program)


def cmd_run(args) -> int:
    try:
        level, _ = _load_level_arg(args.level)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"error: cannot read level: {e}", file=sys.stderr)
        return EXIT_IO
    except LevelError as e:
        for msg in e.errors:
            print(f"level error: {msg}", file=sys.stderr)
        return EXIT_INVALID

    try:
        program, diagnostics = _load_program_file(args.program)
    except OSError as e:
        print(f"error: cannot read program: {e}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, LexError) as e:
        print(f"program error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if diagnostics:
        for d in diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_INVALID

    compiled = compile_program(program)
    world = build_world(level)
    trace_file = None
    if args.trace:
        try:
            trace_file = open(args.trace, "w", encoding="utf-8")
        except OSError as e:
            print(f"error: cannot open trace file: {e}", file=sys.stderr)
            return EXIT_IO

    started = time.perf_counter()
    errors: dict[str, int] = {}
    try:
        for world, record in run_world(
            world, compiled, max_steps=args.max_steps, include_radar=args.radar_trace
        ):
            if trace_file is not None:
                trace_file.write(serialize_record(record) + "\n")
            for entry in record["robots"]:
                if "error" in entry:
                    errors[entry["name"]] = errors.get(entry["name"], 0) + 1
    finally:
        if trace_file is not None:
            trace_file.close()
    duration = time.perf_counter() - started

    report = RunReport(
        final_status=world.status,
        steps_executed=world.step,
        win_step=world.win_step,
        robot_errors=errors,
        duration_s=duration,
        trace_path=args.trace,
    )
    report.print()
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        _, diagnostics = _load_program_file(args.program)
    except OSError as e:
        print(f"error: cannot read program: {e}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, LexError) as e:
        print(f"error: {e}")
        return EXIT_INVALID
    for d in diagnostics:
        print(str(d))
    if diagnostics:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        trace_text = _read(Path(args.trace))
    except OSError as e:
        print(f"error: cannot read trace: {e}", file=sys.stderr)
        return EXIT_IO
    lines = trace_text.splitlines()
    if not lines:
        print("error: empty trace", file=sys.stderr)
        return EXIT_IO
    import json

    for i, line in enumerate(lines):
        try:
            json.loads(line)
        except json.JSONDecodeError:
            print(f"error: corrupt trace at line {i + 1}", file=sys.stderr)
            return EXIT_IO
    include_radar = '"radar"' in lines[0]

    try:
        level, _ = _load_level_arg(args.level)
        program, diagnostics = _load_program_file(args.program)
    except (OSError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, LexError, LevelError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if diagnostics:
        for d in diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_INVALID

    compiled = compile_program(program)
    world = build_world(level)
    produced = 0
    for world, record in run_world(
        world, compiled, max_steps=args.max_steps, include_radar=include_radar
    ):
        line = serialize_record(record)
        if produced >= len(lines):
            print(f"diverged: rerun produced extra step {record['step']}")
            return EXIT_DIVERGED
        if line != lines[produced]:
            print(f"diverged: step {record['step']}")
            return EXIT_DIVERGED
        produced += 1
    if produced < len(lines):
        print(f"diverged: trace has {len(lines) - produced} extra line(s) after step {produced}")
        return EXIT_DIVERGED
    print(f"replay ok: {produced} steps identical")
    return EXIT_OK


def cmd_levels(args) -> int:
    seen = set()
    for base in level_search_dirs():
        if not base.is_dir():
            continue
        for path in sorted(base.glob("*.level.json")):
            name = path.name[: -len(".level.json")]
            if name in seen:
                continue
            seen.add(name)
            try:
                level = load_level(_read(path))
            except (OSError, LevelError) as e:
                print(f"{name}: unreadable ({e})")
                continue
            w, h = level.bounds
            print(
                f"{name}: {w:g}x{h:g} m, {len(level.robots)} robots, "
                f"{len(level.beacons)} beacons, {len(level.areas)} areas"
            )
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        import uvicorn
    except ImportError:
        print("error: uvicorn is required for 'serve'", file=sys.stderr)
        return EXIT_IO
    from .bridge import create_app

    level = None
    if args.level:
        try:
            level, _ = _load_level_arg(args.level)
        except (OSError, FileNotFoundError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
        except LevelError as e:
            print(f"level error: {e}", file=sys.stderr)
            return EXIT_INVALID
    app = create_app(initial_level=level, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simctl", description="Rule-driven robot labyrinth simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a level headless")
    run.add_argument("--level", required=True, help="level file or builtin level name")
    run.add_argument("--program", required=True, help="rule program file (.lgc)")
    run.add_argument("--max-steps", type=int, default=None, help="override the level's limit")
    run.add_argument("--trace", default=None, help="write a JSON Lines trace here")
    run.add_argument("--radar-trace", action="store_true", help="include radar rays in the trace")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="parse and validate a program")
    check.add_argument("--program", required=True)
    check.set_defaults(func=cmd_check)

    replay = sub.add_parser("replay", help="re-run and compare against a recorded trace")
    replay.add_argument("--trace", required=True)
    replay.add_argument("--level", required=True)
    replay.add_argument("--program", required=True)
    replay.add_argument("--max-steps", type=int, default=None)
    replay.set_defaults(func=cmd_replay)

    levels = sub.add_parser("levels", help="list available levels")
    levels.set_defaults(func=cmd_levels)

    serve = sub.add_parser("serve", help="serve the control bridge and cockpit")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static", default=None, help="directory with the cockpit bundle")
    serve.add_argument("--level", default=None, help="level to load at startup")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
