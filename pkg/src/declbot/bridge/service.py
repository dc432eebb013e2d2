"""Control and streaming service: one simulation session shared by all
connected cockpit clients.

All session mutations funnel through one asyncio lock, so concurrent client
commands apply in arrival order; `state` and `win` messages fan out to every
client, other replies go to the requesting client. Unknown message types get
a protocol error, never a disconnect.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..engine import EvaluationError, FactSet, compile_program, evaluate
from ..rulelang import LexError, ParseError, parse_program, validate
from ..scenarios import (
    LevelDocument,
    LevelError,
    build_world,
    level_from_dict,
    level_to_dict,
    load_level,
)
from ..simcore import STATUS_RUNNING, pose_is_free, step_world
from ..simcore.step import memory_facts_for, sensor_fact_for
from ..simcore.sensing import compute_radar
from .protocol import (
    diagnostics_message,
    error_message,
    inspect_result_message,
    state_message,
    win_message,
)

MODE_PAUSED = "paused"
MODE_AUTO = "auto"


class Session:
    def __init__(self, initial_level: Optional[LevelDocument] = None):
        self.level: Optional[LevelDocument] = None
        self.world = None
        self.program = None
        self.program_source: Optional[str] = None
        self.revision = 0
        self.mode = MODE_PAUSED
        self.interval_ms = 100
        self.lock = asyncio.Lock()
        self.clients: set = set()
        self._auto_task: Optional[asyncio.Task] = None
        if initial_level is not None:
            self.install_level(initial_level)

    # -- state management --------------------------------------------------

    def install_level(self, level: LevelDocument) -> None:
        self.level = level
        self.world = build_world(level)
        self.revision += 1

    def snapshot(self) -> dict:
        return state_message(self.world, self.revision)

    async def broadcast(self, message: dict) -> None:
        dead = []
        for client in list(self.clients):
            try:
                await client.send_json(message)
            except Exception:
                dead.append(client)
        for client in dead:
            self.clients.discard(client)

    # -- command handling -----------------------------------------------------

    async def handle_message(self, msg) -> list[dict]:
        """Process one client message; returns the replies (state/win replies
        are broadcast by the caller). The session survives every error."""
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            return [error_message("protocol", "message must be an object with a 'type'")]
        mtype = msg["type"]
        handler = getattr(self, f"_cmd_{mtype}", None)
        if handler is None:
            return [error_message("protocol", f"unknown message type {mtype!r}")]
        async with self.lock:
            self._stop_auto()
            return await handler(msg)

    async def _cmd_load_level(self, msg) -> list[dict]:
        if "level" in msg:
            try:
                level = level_from_dict(msg["level"])
            except LevelError as e:
                return [error_message("validate", "; ".join(e.errors))]
        elif "name" in msg:
            from ..simctl import level_search_dirs

            path = None
            for base in level_search_dirs():
                candidate = Path(base) / f"{msg['name']}.level.json"
                if candidate.exists():
                    path = candidate
                    break
            if path is None:
                return [error_message("protocol", f"unknown level {msg['name']!r}")]
            try:
                level = load_level(path.read_text(encoding="utf-8"))
            except LevelError as e:
                return [error_message("validate", "; ".join(e.errors))]
        else:
            return [error_message("protocol", "load_level needs 'name' or 'level'")]
        self.install_level(level)
        return [self.snapshot()]

    async def _cmd_set_program(self, msg) -> list[dict]:
        source = msg.get("source")
        if not isinstance(source, str):
            return [error_message("protocol", "set_program needs a 'source' string")]
        try:
            program = parse_program(source)
        except (ParseError, LexError) as e:
            return [error_message("parse", e.message, e.line, e.column)]
        diagnostics = validate(program)
        if diagnostics:
            return [diagnostics_message(diagnostics)]
        self.program = compile_program(program)
        self.program_source = source
        self.revision += 1
        return [diagnostics_message([])]

    def _require_world(self) -> Optional[dict]:
        if self.world is None:
            return error_message("protocol", "no level loaded")
        return None

    def _step_once(self) -> list[dict]:
        self.world, _ = step_world(self.world, self.program)
        self.revision += 1
        out = [self.snapshot()]
        if self.world.status == "won":
            out.append(win_message(self.world.win_step))
        return out

    async def _cmd_step(self, msg) -> list[dict]:
        problem = self._require_world()
        if problem:
            return [problem]
        if self.program is None:
            return [error_message("runtime", "no program loaded")]
        count = msg.get("count", 1)
        if not isinstance(count, int) or count < 1:
            return [error_message("protocol", "step count must be a positive integer")]
        out: list[dict] = []
        for _ in range(count):
            if self.world.status != STATUS_RUNNING:
                break
            out.extend(self._step_once())
        if not out:
            out.append(error_message("runtime", f"simulation is {self.world.status}"))
        return out

    async def _cmd_run(self, msg) -> list[dict]:
        problem = self._require_world()
        if problem:
            return [problem]
        if self.program is None:
            return [error_message("runtime", "no program loaded")]
        interval = msg.get("interval_ms", 100)
        if not isinstance(interval, (int, float)) or interval < 0:
            return [error_message("protocol", "interval_ms must be a non-negative number")]
        if self.world.status != STATUS_RUNNING:
            return [error_message("runtime", f"simulation is {self.world.status}")]
        self.mode = MODE_AUTO
        self.interval_ms = float(interval)
        self._auto_task = asyncio.create_task(self._auto_loop())
        return [self.snapshot()]

    async def _cmd_pause(self, msg) -> list[dict]:
        problem = self._require_world()
        if problem:
            return [problem]
        return [self.snapshot()]  # auto-run already stopped by handle_message

    async def _cmd_reset(self, msg) -> list[dict]:
        if self.level is None:
            return [error_message("protocol", "no level loaded")]
        self.install_level(self.level)
        return [self.snapshot()]

    async def _cmd_inspect(self, msg) -> list[dict]:
        problem = self._require_world()
        if problem:
            return [problem]
        if self.program is None:
            return [error_message("runtime", "no program loaded")]
        robot_name = msg.get("robot")
        predicate = msg.get("predicate")
        if not isinstance(robot_name, str) or not isinstance(predicate, str):
            return [error_message("protocol", "inspect needs 'robot' and 'predicate'")]
        try:
            robot = self.world.robot(robot_name)
        except KeyError:
            return [error_message("protocol", f"unknown robot {robot_name!r}")]
        radar = compute_radar(self.world, robot)
        inputs = FactSet()
        inputs.add_fact(sensor_fact_for(self.world, robot_name, radar))
        for fact in memory_facts_for(self.world, robot_name):
            inputs.add_fact(fact)
        try:
            facts = evaluate(self.program, inputs)
        except EvaluationError as e:
            line, column = (e.span or (None, None))
            return [error_message("runtime", e.message, line, column)]
        return [inspect_result_message(robot_name, predicate, facts.rows(predicate))]

    async def _cmd_edit(self, msg) -> list[dict]:
        if self.level is None:
            return [error_message("protocol", "no level loaded")]
        op = msg.get("op")
        if not isinstance(op, dict):
            return [error_message("protocol", "edit needs an 'op' object")]
        try:
            new_level = self._edited_level(op)
        except LevelError as e:
            return [error_message("validate", "; ".join(e.errors))]
        except (KeyError, IndexError, TypeError, ValueError) as e:
            return [error_message("protocol", f"bad edit op: {e}")]

        new_world = self._carry_runtime_state(build_world(new_level))
        for robot in new_world.robots:
            if not pose_is_free(new_world, robot.name, robot.x, robot.y):
                return [
                    error_message(
                        "validate", f"edit would embed robot '{robot.name}' in an obstacle"
                    )
                ]
        self.level = new_level
        self.world = new_world
        self.revision += 1
        return [self.snapshot()]

    def _edited_level(self, op: dict) -> LevelDocument:
        data = level_to_dict(self.level)
        target = op.get("target")
        action = op.get("action")
        if target == "wall":
            if action == "add":
                data["walls"].append(op["segment"])
            elif action == "remove":
                data["walls"].pop(int(op["index"]))
            elif action == "move":
                data["walls"][int(op["index"])] = op["segment"]
            else:
                raise ValueError(f"unknown wall action {action!r}")
        elif target == "beacon":
            if action == "add":
                data["beacons"].append(
                    {"label": op["label"], "x": op["x"], "y": op["y"]}
                )
            elif action == "remove":
                data["beacons"] = [b for b in data["beacons"] if b["label"] != op["label"]]
            elif action == "move":
                for b in data["beacons"]:
                    if b["label"] == op["label"]:
                        b["x"], b["y"] = op["x"], op["y"]
                        break
                else:
                    raise KeyError(op["label"])
            else:
                raise ValueError(f"unknown beacon action {action!r}")
        elif target == "robot":
            if action == "add":
                data["robots"].append(
                    {
                        "name": op["name"],
                        "x": op["x"],
                        "y": op["y"],
                        "heading": op.get("heading", 0.0),
                    }
                )
            elif action == "remove":
                data["robots"] = [r for r in data["robots"] if r["name"] != op["name"]]
            elif action == "move":
                for r in data["robots"]:
                    if r["name"] == op["name"]:
                        r["x"], r["y"] = op["x"], op["y"]
                        if "heading" in op:
                            r["heading"] = op["heading"]
                        break
                else:
                    raise KeyError(op["name"])
            else:
                raise ValueError(f"unknown robot action {action!r}")
        elif target == "area":
            if action == "add":
                data["areas"].append(
                    {
                        "id": op["id"],
                        "center": op["center"],
                        "radius": op["radius"],
                        "trigger_beacon": op["trigger_beacon"],
                        "mode": op.get("mode", "while_detected"),
                        "initial_state": op.get("initial_state", "restricted"),
                        "color": op.get("color", "red"),
                    }
                )
            elif action == "remove":
                data["areas"] = [a for a in data["areas"] if a["id"] != op["id"]]
            elif action == "move":
                for a in data["areas"]:
                    if a["id"] == op["id"]:
                        a["center"] = op["center"]
                        if "radius" in op:
                            a["radius"] = op["radius"]
                        break
                else:
                    raise KeyError(op["id"])
            else:
                raise ValueError(f"unknown area action {action!r}")
        elif target == "win":
            if action == "add":
                data["win"].append({"zone": op["zone"], "robots": op.get("robots", "all")})
            elif action == "remove":
                data["win"].pop(int(op["index"]))
            elif action == "move":
                entry = data["win"][int(op["index"])]
                entry["zone"] = op["zone"]
                if "robots" in op:
                    entry["robots"] = op["robots"]
            else:
                raise ValueError(f"unknown win action {action!r}")
        else:
            raise ValueError(f"unknown edit target {target!r}")
        return level_from_dict(data)

    def _carry_runtime_state(self, new_world):
        """Preserve current robot poses/memories and area states across an
        edit; entities that survived the edit keep their runtime state."""
        old = self.world
        robots = []
        for robot in new_world.robots:
            try:
                current = old.robot(robot.name)
            except KeyError:
                robots.append(robot)
                continue
            robots.append(
                replace(
                    robot,
                    x=current.x,
                    y=current.y,
                    heading=current.heading,
                    memory=current.memory,
                    last_desire=current.last_desire,
                    last_error=current.last_error,
                    last_warning=current.last_warning,
                )
            )
        # Edits that explicitly moved a robot override the carried pose.
        moved = {r.name: r for r in new_world.robots}
        carried = []
        for robot in robots:
            doc_robot = moved[robot.name]
            old_doc = None
            try:
                old_doc = next(r for r in self.level.robots if r.name == robot.name)
            except StopIteration:
                pass
            if old_doc is not None and (doc_robot.x, doc_robot.y) != (old_doc.x, old_doc.y):
                robot = replace(robot, x=doc_robot.x, y=doc_robot.y, heading=doc_robot.heading)
            carried.append(robot)
        areas = []
        old_areas = {a.id: a for a in old.areas}
        for area in new_world.areas:
            if area.id in old_areas:
                areas.append(
                    replace(
                        area,
                        state=old_areas[area.id].state,
                        last_detected=old_areas[area.id].last_detected,
                    )
                )
            else:
                areas.append(area)
        return replace(
            new_world,
            robots=tuple(sorted(carried, key=lambda r: r.name)),
            areas=tuple(areas),
            step=old.step,
            status=old.status,
            win_step=old.win_step,
        )

    # -- auto-run ------------------------------------------------------------

    def _stop_auto(self) -> None:
        self.mode = MODE_PAUSED
        if self._auto_task is not None:
            self._auto_task.cancel()
            self._auto_task = None

    async def _auto_loop(self):
        try:
            while True:
                await asyncio.sleep(self.interval_ms / 1000.0)
                async with self.lock:
                    if self.mode != MODE_AUTO or self.world is None or self.program is None:
                        return
                    if self.world.status != STATUS_RUNNING:
                        self.mode = MODE_PAUSED
                        return
                    messages = self._step_once()
                    if self.world.status != STATUS_RUNNING:
                        self.mode = MODE_PAUSED
                for message in messages:
                    await self.broadcast(message)
        except asyncio.CancelledError:
            pass


def create_app(
    initial_level: Optional[LevelDocument] = None, static_dir: Optional[str] = None
) -> FastAPI:
    app = FastAPI(title="declbot bridge")
    session = Session(initial_level)
    app.state.session = session

    @app.get("/state")
    async def get_state():
        async with session.lock:
            if session.world is None:
                return JSONResponse({"error": "no level loaded"}, status_code=404)
            return JSONResponse(session.snapshot()["payload"])

    @app.get("/levels")
    async def get_levels():
        from ..simctl import level_search_dirs

        names = []
        for base in level_search_dirs():
            if base.is_dir():
                for path in sorted(base.glob("*.level.json")):
                    name = path.name[: -len(".level.json")]
                    if name not in names:
                        names.append(name)
        return JSONResponse({"levels": names})

    @app.get("/levels/{name}")
    async def get_level(name: str):
        from ..simctl import level_search_dirs

        for base in level_search_dirs():
            path = base / f"{name}.level.json"
            if path.exists():
                try:
                    level = load_level(path.read_text(encoding="utf-8"))
                except LevelError as e:
                    return JSONResponse({"error": "; ".join(e.errors)}, status_code=500)
                return JSONResponse(level_to_dict(level))
        return JSONResponse({"error": f"unknown level {name!r}"}, status_code=404)

    @app.websocket("/ws")
    async def websocket_endpoint(websocket: WebSocket):
        await websocket.accept()
        session.clients.add(websocket)
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as e:
                    await websocket.send_json(
                        error_message("protocol", f"invalid JSON: {e}")
                    )
                    continue
                replies = await session.handle_message(msg)
                for reply in replies:
                    if reply["type"] in ("state", "win"):
                        await session.broadcast(reply)
                    else:
                        await websocket.send_json(reply)
        except WebSocketDisconnect:
            pass
        finally:
            session.clients.discard(websocket)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="cockpit")

    return app
