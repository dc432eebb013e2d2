"""CLI behavior: exit codes, reports, trace determinism, replay."""

from __future__ import annotations

import json

import pytest

from declbot.scenarios import builtin_levels_dir
from declbot.simctl import main

from programs import DISTANCE_RELAXATION_PROGRAM, OPEN_FIELD_PROGRAM

LEVELS = builtin_levels_dir()


@pytest.fixture
def small_level(tmp_path):
    doc = {
        "format_version": 1,
        "name": "tiny",
        "bounds": {"width": 12, "height": 12},
        "robots": [{"name": "r1", "x": 6, "y": 6, "heading": 0.4}],
        "walls": [[[3, 3], [9, 3]]],
        "max_steps": 40,
    }
    path = tmp_path / "tiny.level.json"
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def avoidance_program(tmp_path):
    path = tmp_path / "avoid.lgc"
    path.write_text(OPEN_FIELD_PROGRAM)
    return path


def test_run_small_level(small_level, avoidance_program, capsys, tmp_path):
    trace = tmp_path / "out.trace"
    code = main(
        [
            "run",
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
            "--trace",
            str(trace),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "status: step_limit_reached" in out
    assert "steps: 40" in out
    assert "robot_errors: none" in out
    assert len(trace.read_text().splitlines()) == 40


def test_run_builtin_level_by_name(avoidance_program, capsys):
    code = main(
        [
            "run",
            "--level",
            "level01_open_field",
            "--program",
            str(avoidance_program),
            "--max-steps",
            "25",
        ]
    )
    assert code == 0
    assert "steps: 25" in capsys.readouterr().out


def test_run_wins_at_recorded_step(capsys):
    code = main(
        [
            "run",
            "--level",
            "level07_station",
            "--program",
            str(LEVELS / "level07_station.lgc"),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "status: won" in out
    assert "win_step: 300" in out


def test_run_malformed_program_exits_2(small_level, tmp_path, capsys):
    bad = tmp_path / "bad.lgc"
    bad.write_text("P(x:")
    code = main(["run", "--level", str(small_level), "--program", str(bad)])
    assert code == 2
    assert "line 1" in capsys.readouterr().err


def test_run_missing_files_exit_3(small_level, avoidance_program):
    assert main(["run", "--level", "nope_no_such", "--program", str(avoidance_program)]) == 3
    assert main(["run", "--level", str(small_level), "--program", "/nonexistent.lgc"]) == 3


def test_level_dir_env_override(tmp_path, avoidance_program, monkeypatch, capsys):
    doc = {
        "format_version": 1,
        "name": "custom",
        "bounds": {"width": 8, "height": 8},
        "robots": [{"name": "x", "x": 4, "y": 4}],
        "max_steps": 5,
    }
    (tmp_path / "custom.level.json").write_text(json.dumps(doc))
    monkeypatch.setenv("DECLBOT_LEVEL_DIR", str(tmp_path))
    code = main(["run", "--level", "custom", "--program", str(avoidance_program)])
    assert code == 0
    assert "steps: 5" in capsys.readouterr().out


def test_check_accepts_reference_programs(tmp_path, capsys):
    for source in (OPEN_FIELD_PROGRAM, DISTANCE_RELAXATION_PROGRAM):
        path = tmp_path / "prog.lgc"
        path.write_text(source)
        assert main(["check", "--program", str(path)]) == 0
    assert "ok" in capsys.readouterr().out


def test_check_recursive_program(tmp_path, capsys):
    path = tmp_path / "rec.lgc"
    path.write_text("P(x: y) :- P(x: y);")
    assert main(["check", "--program", str(path)]) == 2
    assert "recursive" in capsys.readouterr().out


def test_check_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.lgc"
    path.write_text("")
    assert main(["check", "--program", str(path)]) == 2
    assert "no rules" in capsys.readouterr().out


def test_run_twice_produces_identical_traces(small_level, avoidance_program, tmp_path, capsys):
    t1 = tmp_path / "a.trace"
    t2 = tmp_path / "b.trace"
    for t in (t1, t2):
        assert (
            main(
                [
                    "run",
                    "--level",
                    str(small_level),
                    "--program",
                    str(avoidance_program),
                    "--trace",
                    str(t),
                ]
            )
            == 0
        )
    capsys.readouterr()
    assert t1.read_bytes() == t2.read_bytes()


def test_replay_matches(small_level, avoidance_program, tmp_path, capsys):
    trace = tmp_path / "run.trace"
    main(
        [
            "run",
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
            "--trace",
            str(trace),
            "--radar-trace",
        ]
    )
    code = main(
        [
            "replay",
            "--trace",
            str(trace),
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "replay ok" in out


def test_replay_detects_edited_coordinate(small_level, avoidance_program, tmp_path, capsys):
    trace = tmp_path / "run.trace"
    main(
        [
            "run",
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
            "--trace",
            str(trace),
        ]
    )
    lines = trace.read_text().splitlines()
    record = json.loads(lines[10])
    record["robots"][0]["x"] += 0.25
    lines[10] = json.dumps(record, ensure_ascii=False, separators=(",", ":"))
    trace.write_text("\n".join(lines) + "\n")
    code = main(
        [
            "replay",
            "--trace",
            str(trace),
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
        ]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "step 11" in out


def test_replay_truncated_trace_exits_3(small_level, avoidance_program, tmp_path, capsys):
    trace = tmp_path / "run.trace"
    main(
        [
            "run",
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
            "--trace",
            str(trace),
        ]
    )
    text = trace.read_text()
    trace.write_text(text[: len(text) // 2].rsplit("\n", 1)[0] + '{"step": tru')
    code = main(
        [
            "replay",
            "--trace",
            str(trace),
            "--level",
            str(small_level),
            "--program",
            str(avoidance_program),
        ]
    )
    assert code == 3
    assert "corrupt" in capsys.readouterr().err


def test_levels_lists_builtins(capsys):
    assert main(["levels"]) == 0
    out = capsys.readouterr().out
    for name in (
        "level01_open_field",
        "level07_station",
        "level08_formation",
        "level10_mapping",
    ):
        assert name in out
