"""Demonstration records: line-delimited text, one header line, one line per
step, one footer line. Replaying a demo re-executes its action sequence and
verifies per-step rewards and the final world hash bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .env import EnvConfig, Environment

DEMO_FORMAT = "gridhouse-demo"
DEMO_VERSION = 1


class DemoError(Exception):
    pass


class VersionMismatch(DemoError):
    pass


class HashMismatch(DemoError):
    pass


@dataclass
class DemoRecord:
    task: str
    config: EnvConfig
    controller: str = "scripted"  # human | scripted | random
    actions: list[int] = field(default_factory=list)
    rewards: list[float] = field(default_factory=list)
    final_hash: int = 0
    timestamp: str = ""

    def append(self, action: int, reward: float) -> None:
        self.actions.append(int(action))
        self.rewards.append(float(reward))

    def finalize(self, world) -> None:
        self.final_hash = world.state_hash()
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()

    def dumps(self) -> str:
        header = {
            "format": DEMO_FORMAT,
            "version": DEMO_VERSION,
            "task": self.task,
            "config": self.config.to_dict(),
            "controller": self.controller,
            "timestamp": self.timestamp,
        }
        lines = [json.dumps(header, sort_keys=True)]
        for action, reward in zip(self.actions, self.rewards):
            lines.append(json.dumps({"action": action, "reward": reward},
                                    sort_keys=True))
        footer = {
            "final_hash": f"{self.final_hash:016x}",
            "steps": len(self.actions),
            "total_reward": sum(self.rewards),
        }
        lines.append(json.dumps(footer, sort_keys=True))
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "DemoRecord":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 2:
            raise DemoError("demo file too short")
        header = json.loads(lines[0])
        if header.get("format") != DEMO_FORMAT:
            raise DemoError("not a demo file")
        if header.get("version") != DEMO_VERSION:
            raise VersionMismatch(f"demo version {header.get('version')}")
        footer = json.loads(lines[-1])
        record = cls(
            task=header["task"],
            config=EnvConfig.from_dict(header["config"]),
            controller=header["controller"],
            timestamp=header.get("timestamp", ""),
            final_hash=int(footer["final_hash"], 16),
        )
        for line in lines[1:-1]:
            step = json.loads(line)
            record.append(step["action"], step["reward"])
        if footer["steps"] != len(record.actions):
            raise DemoError("step count mismatch between footer and body")
        return record

    @classmethod
    def load(cls, path: str | Path) -> "DemoRecord":
        return cls.loads(Path(path).read_text())


def replay(record: DemoRecord) -> None:
    """Re-run a demo; raises HashMismatch on any reward or final-hash drift."""
    env = Environment(record.config)
    env.reset()
    for i, (action, expected) in enumerate(zip(record.actions, record.rewards)):
        result = env.step(action)
        if result.reward != expected:
            raise HashMismatch(
                f"step {i}: reward {result.reward!r} != recorded {expected!r}")
    final = env.world.state_hash()
    if final != record.final_hash:
        raise HashMismatch(
            f"final hash {final:016x} != recorded {record.final_hash:016x}")


def record_episode(env: Environment, actions, controller: str = "scripted",
                   stop_when_finished: bool = True) -> DemoRecord:
    """Drive an env through an action sequence, recording as it goes."""
    record = DemoRecord(task=env.task.name, config=env.effective_config(),
                        controller=controller)
    for action in actions:
        result = env.step(action)
        record.append(int(action), result.reward)
        if stop_when_finished and (result.terminated or result.truncated):
            break
    record.finalize(env.world)
    return record
