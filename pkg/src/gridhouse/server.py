"""Interactive session server: one WebSocket connection = one live
environment session.

Messages are JSON envelopes serialized with sorted keys so snapshots are
byte-stable. Every action message is answered by exactly one snapshot or
error; snapshots carry the full symbolic world so clients stay stateless.
See docs/protocol.md for the field-by-field description.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .cli import action_legend
from .demo import DemoRecord
from .env import EnvConfig, Environment, EpisodeFinished
from .tasks import TaskError, load_task_library
from .world import HEADING_NAMES

PROTOCOL_VERSION = 1

VIEW_MODES = ("default", "single_dim", "furniture_only")


def canonical(message: dict) -> str:
    return json.dumps(message, sort_keys=True, separators=(",", ":"))


def error_message(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def welcome_message() -> dict:
    return {
        "type": "welcome",
        "protocol_version": PROTOCOL_VERSION,
        "task_library": sorted(load_task_library()),
        "action_legend": action_legend(),
    }


def snapshot_message(session: "Session") -> dict:
    env = session.env
    world = env.world
    facing = None
    xy = world.facing_cell()
    if xy is not None:
        cell = world.cell(*xy)
        facing = {
            "x": xy[0], "y": xy[1], "wall": cell.wall,
            "door": cell.door is not None,
            "furniture": cell.furniture,
            "slots": list(cell.slots),
        }
    return {
        "type": "snapshot",
        "task": env.task.name,
        "step": world.step_count,
        "grid": {"width": world.width, "height": world.height, "z_levels": 3},
        "rooms": [{"id": r.id, "name": r.name, "bounds": list(r.bounds)}
                  for r in world.rooms],
        "walls": sorted([x, y] for y in range(world.height)
                        for x in range(world.width) if world.cell(x, y).wall),
        "doors": [{"id": did, "x": x, "y": y}
                  for did, (x, y) in sorted(world.doors.items())],
        "furniture": [
            {"id": f.id, "category": f.category, "anchor": [f.x, f.y],
             "size": [f.w, f.d], "height": f.height, "room": f.room,
             "states": sorted(f.states),
             "dust_cells": sorted(list(c) for c in f.dust_cells)}
            for f in sorted(world.furniture.values(), key=lambda f: f.id)
        ],
        "objects": [
            {"id": o.id, "category": o.category,
             "placement": "carried" if o.carried else [o.x, o.y, o.z],
             "states": sorted(o.states)}
            for o in sorted(world.objects.values(), key=lambda o: o.id)
        ],
        "agent": {"x": world.agent.x, "y": world.agent.y,
                  "heading": HEADING_NAMES[world.agent.heading],
                  "carrying": list(world.agent.carrying)},
        "facing": facing,
        "goal_progress": {
            "satisfied_milestones": len(env.progress.satisfied_milestones),
            "total_milestones": len(env.task.milestones or ()),
            "goal_met": env.progress.goal_met,
        },
        "last_action_outcome": session.last_outcome,
        "reward": session.last_reward,
        "terminated": session.terminated,
        "truncated": session.truncated,
        "view": dict(session.view),
        "saved_to": session.saved_to,
        "state_hash": f"{world.state_hash():016x}",
    }


@dataclass
class Session:
    env: Environment | None = None
    demo: DemoRecord | None = None
    last_outcome: dict | None = None
    last_reward: float = 0.0
    terminated: bool = False
    truncated: bool = False
    view: dict = field(default_factory=lambda: {"mode": "default", "z": None,
                                                "closeup": False})
    saved_to: str | None = None

    def handle(self, message: dict) -> dict:
        kind = message.get("type")
        if kind == "hello":
            wanted = message.get("protocol", PROTOCOL_VERSION)
            if wanted != PROTOCOL_VERSION:
                return error_message(
                    "VERSION_MISMATCH",
                    f"server speaks protocol {PROTOCOL_VERSION}, client asked {wanted}")
            return welcome_message()
        if kind == "reset":
            return self._reset(message)
        if kind == "action":
            return self._action(message)
        if kind == "set_view":
            return self._set_view(message)
        if kind == "save_demo":
            return self._save_demo(message)
        return error_message("BAD_MESSAGE", f"unknown message type {kind!r}")

    def _reset(self, message: dict) -> dict:
        extra = message.get("config") or {}
        try:
            config = EnvConfig(
                task=message.get("task", "installing_a_printer"),
                seed=int(message.get("seed", 0)),
                max_steps=int(extra.get("max_steps", 1000)),
                grid=tuple(extra["grid"]) if extra.get("grid") else None,
                rooms=extra.get("rooms"),
                layout=extra.get("layout"),
                reward_mode=extra.get("reward_mode", "sparse"),
            )
            self.env = Environment(config)
            self.env.reset()
        except (TaskError, ValueError) as e:
            self.env = None
            return error_message("UNKNOWN_TASK", str(e))
        self.demo = DemoRecord(task=self.env.task.name,
                               config=self.env.effective_config(),
                               controller="human")
        self.last_outcome = None
        self.last_reward = 0.0
        self.terminated = self.truncated = False
        self.saved_to = None
        return snapshot_message(self)

    def _action(self, message: dict) -> dict:
        if self.env is None or self.env.world is None:
            return error_message("NO_EPISODE", "reset before acting")
        encoding = message.get("encoding")
        if not isinstance(encoding, int) or not 0 <= encoding < self.env.action_space().n:
            return error_message("INVALID_ENCODING", f"bad encoding {encoding!r}")
        try:
            result = self.env.step(encoding)
        except EpisodeFinished:
            return error_message("EPISODE_FINISHED", "episode is over; reset to continue")
        self.demo.append(encoding, result.reward)
        self.last_outcome = dict(result.info["action_outcome"])
        self.last_reward = result.reward
        self.terminated = result.terminated
        self.truncated = result.truncated
        self.saved_to = None
        return snapshot_message(self)

    def _set_view(self, message: dict) -> dict:
        if self.env is None:
            return error_message("NO_EPISODE", "reset before setting a view")
        mode = message.get("mode", "default")
        if mode not in VIEW_MODES:
            return error_message("BAD_MESSAGE", f"unknown view mode {mode!r}")
        self.view = {"mode": mode, "z": message.get("z"),
                     "closeup": bool(message.get("closeup", False))}
        self.saved_to = None
        return snapshot_message(self)

    def _save_demo(self, message: dict) -> dict:
        if self.env is None or self.demo is None:
            return error_message("NO_EPISODE", "nothing to save")
        path = message.get("path")
        if not path:
            return error_message("BAD_MESSAGE", "save_demo needs a path")
        self.demo.finalize(self.env.world)
        try:
            self.demo.save(path)
        except OSError as e:
            return error_message("BAD_MESSAGE", f"cannot write {path!r}: {e}")
        self.saved_to = str(path)
        return snapshot_message(self)


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="gridhouse session server")

    @app.websocket("/ws")
    async def ws_endpoint(socket: WebSocket):
        await socket.accept()
        session = Session()
        try:
            while True:
                raw = await socket.receive_text()
                try:
                    message = json.loads(raw)
                    if not isinstance(message, dict):
                        raise ValueError("message must be an object")
                except ValueError as e:
                    await socket.send_text(canonical(
                        error_message("BAD_MESSAGE", str(e))))
                    continue
                reply = session.handle(message)
                await socket.send_text(canonical(reply))
        except WebSocketDisconnect:
            pass

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    return app
