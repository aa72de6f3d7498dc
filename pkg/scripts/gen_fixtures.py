#!/usr/bin/env python3
"""Regenerate the frozen test fixtures: demo files, the search-solution
baseline, and the golden protocol exchanges.

Run from the repository root:  python3 scripts/gen_fixtures.py
Outputs are committed; tests verify against them without regenerating.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from gridhouse.agents import RandomAgent, bfs_solve, scripted_actions  # noqa: E402
from gridhouse.demo import DemoRecord, record_episode  # noqa: E402
from gridhouse.env import EnvConfig, Environment  # noqa: E402
from gridhouse.server import Session, canonical, welcome_message  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
PROTOCOL = ROOT / "docs" / "protocol"


def fixed_timestamp(record: DemoRecord) -> DemoRecord:
    record.timestamp = "2024-01-01T00:00:00+00:00"
    return record


def gen_scripted_demo() -> None:
    env = Environment(EnvConfig(task="installing_a_printer", seed=3))
    env.reset()
    actions = scripted_actions(env.task, env.world)
    record = fixed_timestamp(record_episode(env, actions, controller="scripted"))
    record.save(FIXTURES / "demo_scripted_printer.txt")


def gen_dense_demo() -> None:
    env = Environment(EnvConfig(task="washing_pots_and_pans", seed=2,
                                reward_mode="dense"))
    env.reset()
    actions = scripted_actions(env.task, env.world)
    record = fixed_timestamp(record_episode(env, actions, controller="scripted"))
    record.save(FIXTURES / "demo_washing_dense.txt")


def gen_random_demo() -> None:
    env = Environment(EnvConfig(task="making_tea", seed=9, max_steps=60))
    env.reset()
    agent = RandomAgent(9)
    record = DemoRecord(task=env.task.name, config=env.effective_config(),
                        controller="random")
    for _ in range(60):
        action = int(agent.choose(env.world))
        result = env.step(action)
        record.append(action, result.reward)
        if result.terminated or result.truncated:
            break
    record.finalize(env.world)
    fixed_timestamp(record).save(FIXTURES / "demo_random_walk.txt")


def gen_keyboard_demo() -> None:
    """The web client's keyboard flow, driven through a server session; the
    key sequence solves installing_a_printer at seed 3."""
    session = Session()
    session.handle({"type": "hello", "client_version": "fixture"})
    session.handle({"type": "reset", "task": "installing_a_printer", "seed": 3})
    env = Environment(EnvConfig(task="installing_a_printer", seed=3))
    env.reset()
    actions = scripted_actions(env.task, env.world)
    for action in actions:
        reply = session.handle({"type": "action", "encoding": int(action)})
        assert reply["type"] == "snapshot", reply
    path = FIXTURES / "demo_ui_keyboard.txt"
    reply = session.handle({"type": "save_demo", "path": str(path)})
    assert reply["saved_to"] == str(path)
    record = DemoRecord.load(path)
    fixed_timestamp(record).save(path)
    # key names the web client would send for this action sequence
    from gridhouse.cli import KEY_BINDINGS
    primary = {}
    for key, act in KEY_BINDINGS:
        primary.setdefault(int(act), key)
    keys = [primary[a] for a in actions]
    (FIXTURES / "ui_keyboard_sequence.json").write_text(json.dumps({
        "task": "installing_a_printer", "seed": 3,
        "keys": keys, "actions": [int(a) for a in actions],
    }, indent=2) + "\n")


def gen_bfs_baseline() -> None:
    env = Environment(EnvConfig(task="installing_a_printer", seed=0,
                                grid=(6, 6)))
    env.reset()
    actions = bfs_solve(env.task, env.world)
    assert actions is not None
    (FIXTURES / "bfs_printer_6x6.json").write_text(json.dumps({
        "task": "installing_a_printer", "seed": 0, "grid": 6,
        "solution_length": len(actions), "actions": actions,
    }, indent=2) + "\n")


def gen_protocol_goldens() -> None:
    session = Session()
    hello = {"type": "hello", "client_version": "golden", "protocol": 1}
    welcome = session.handle(hello)
    assert welcome == welcome_message()
    (PROTOCOL / "hello_welcome.json").write_text(json.dumps(
        {"client": hello, "server": welcome}, indent=2, sort_keys=True) + "\n")

    reset = {"type": "reset", "task": "installing_a_printer", "seed": 3}
    snapshot = session.handle(reset)
    (PROTOCOL / "reset_snapshot.json").write_text(json.dumps(
        {"client": reset, "server": snapshot}, indent=2, sort_keys=True) + "\n")

    action = {"type": "action", "encoding": 2}
    snapshot2 = session.handle(action)
    (PROTOCOL / "action_snapshot.json").write_text(json.dumps(
        {"client": action, "server": snapshot2}, indent=2, sort_keys=True) + "\n")
    # canonical wire form is byte-stable
    assert canonical(snapshot2) == canonical(json.loads(canonical(snapshot2)))


def gen_frontend_session() -> None:
    """A full recorded live exchange for the web client's tests: keyboard-
    driven installing_a_printer at seed 3, every request/reply pair."""
    out_dir = ROOT / "frontend" / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    keys = json.loads((FIXTURES / "ui_keyboard_sequence.json").read_text())
    session = Session()
    exchanges = []

    def talk(message):
        reply = session.handle(message)
        exchanges.append({"send": message, "recv": reply})
        return reply

    talk({"type": "hello", "client_version": "gridhouse-web/0.1.0", "protocol": 1})
    talk({"type": "reset", "task": keys["task"], "seed": keys["seed"]})
    for action in keys["actions"]:
        reply = talk({"type": "action", "encoding": int(action)})
        assert reply["type"] == "snapshot"
    assert exchanges[-1]["recv"]["terminated"] is True
    (out_dir / "session_printer.json").write_text(
        json.dumps({"keys": keys["keys"], "exchanges": exchanges}, indent=2,
                   sort_keys=True) + "\n")
    # the demo text the core CLI must accept from a client-side recorder
    record = DemoRecord.load(FIXTURES / "demo_ui_keyboard.txt")
    (out_dir / "expected_demo.txt").write_text(record.dumps())


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    PROTOCOL.mkdir(parents=True, exist_ok=True)
    gen_scripted_demo()
    gen_dense_demo()
    gen_random_demo()
    gen_keyboard_demo()
    gen_bfs_baseline()
    gen_protocol_goldens()
    gen_frontend_session()
    print(f"fixtures written under {FIXTURES} and {PROTOCOL}")


if __name__ == "__main__":
    main()
