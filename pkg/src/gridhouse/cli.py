"""Command-line tools: episode runner, throughput benchmark, demo
record/replay, terminal manual control, and the server launcher.

Exit codes: 0 goal reached (or clean completion), 1 resolution/usage errors,
2 episode truncated, 3 replay hash mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
import time
from pathlib import Path

from .actions import PrimitiveAction
from .agents import PlanningError, RandomAgent, bfs_solve, scripted_actions
from .demo import DemoError, DemoRecord, HashMismatch, replay
from .env import EnvConfig, Environment, observation_bytes
from .tasks import TaskError, load_task_library
from .world import GridWorld

# Keyboard layout for manual control; the server legend and the web client
# use the same table.
KEY_BINDINGS: tuple[tuple[str, PrimitiveAction], ...] = (
    ("Up", PrimitiveAction.forward),
    ("Left", PrimitiveAction.turn_left),
    ("Right", PrimitiveAction.turn_right),
    ("w", PrimitiveAction.forward),
    ("a", PrimitiveAction.turn_left),
    ("d", PrimitiveAction.turn_right),
    ("1", PrimitiveAction.pickup_bottom),
    ("2", PrimitiveAction.pickup_middle),
    ("3", PrimitiveAction.pickup_top),
    ("4", PrimitiveAction.drop_bottom),
    ("5", PrimitiveAction.drop_middle),
    ("6", PrimitiveAction.drop_top),
    ("7", PrimitiveAction.drop_in),
    ("o", PrimitiveAction.open),
    ("c", PrimitiveAction.close),
    ("t", PrimitiveAction.toggle),
    ("s", PrimitiveAction.slice),
    ("k", PrimitiveAction.cook),
)

QUIT_KEYS = ("q", "\x03", "\x04")

_ARROW_SEQ = {"\x1b[A": "Up", "\x1b[D": "Left", "\x1b[C": "Right"}

AGENT_GLYPHS = {0: "^", 1: ">", 2: "v", 3: "<"}


def action_legend() -> list[dict]:
    seen = {}
    for key, action in KEY_BINDINGS:
        seen.setdefault(int(action), {"encoding": int(action),
                                      "name": action.name, "keys": []})
        seen[int(action)]["keys"].append(key)
    return [seen[i] for i in sorted(seen)]


def render_ascii(world: GridWorld) -> str:
    rows = []
    for y in range(world.height):
        row = []
        for x in range(world.width):
            cell = world.cell(x, y)
            ch = "."
            if cell.wall:
                ch = "#"
            elif (x, y) == (world.agent.x, world.agent.y):
                ch = AGENT_GLYPHS[world.agent.heading]
            elif cell.door is not None:
                ch = "+"
            else:
                top = next((cell.slots[z] for z in (2, 1, 0)
                            if cell.slots[z] is not None), None)
                if top is not None:
                    ch = world.objects[top].category[0].lower()
                elif cell.furniture is not None:
                    ch = world.furniture[cell.furniture].category[0].upper()
            row.append(ch)
        rows.append("".join(row))
    return "\n".join(rows)


def _build_config(args) -> EnvConfig:
    grid = None
    if args.grid_size:
        grid = (args.grid_size, args.grid_size)
    return EnvConfig(
        task=args.task,
        action_mode=args.action_mode,
        observation_mode=args.obs_mode,
        reward_mode=args.reward_mode,
        max_steps=args.max_steps,
        grid=grid,
        rooms=args.rooms,
        layout=args.layout,
        seed=args.seed,
    )


def cmd_run(args) -> int:
    try:
        config = _build_config(args)
        env = Environment(config)
    except (TaskError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    obs = env.reset()
    obs_dump = [observation_bytes(obs)] if args.dump_obs else None

    if args.agent == "random":
        agent_rng = RandomAgent(config.seed)
        controller = "random"

        def next_action():
            return int(agent_rng.choose(env.world))
    elif args.agent == "bfs" or args.agent.startswith("scripted"):
        try:
            if args.agent == "bfs":
                plan = bfs_solve(env.task, env.world)
                if plan is None:
                    print("error: search found no solution", file=sys.stderr)
                    return 1
            else:
                plan = scripted_actions(env.task, env.world)
        except PlanningError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        controller = "scripted"
        queue = list(plan)

        def next_action():
            return queue.pop(0) if queue else int(PrimitiveAction.turn_left)
    else:
        print(f"error: unknown agent {args.agent!r}", file=sys.stderr)
        return 1

    record = DemoRecord(task=env.task.name, config=env.effective_config(),
                        controller=controller)
    total = 0.0
    terminated = truncated = False
    while not (terminated or truncated):
        action = next_action()
        result = env.step(action)
        record.append(action, result.reward)
        if obs_dump is not None:
            obs_dump.append(observation_bytes(result.observation))
        total += result.reward
        terminated, truncated = result.terminated, result.truncated
        if args.log:
            name = env.action_space().decode(action)
            print(f"step {env.world.step_count}: {name} -> reward {result.reward}"
                  f" outcome {result.info['action_outcome']}")
    record.finalize(env.world)

    if args.record:
        record.save(args.record)
        print(f"demo written to {args.record}")
    if obs_dump is not None:
        Path(args.dump_obs).write_bytes(b"".join(obs_dump))
        print(f"observations written to {args.dump_obs}")

    cause = "goal" if terminated else "time-limit"
    print(f"episode finished: steps={env.world.step_count} reward={total} "
          f"cause={cause} final_hash={env.world.state_hash():016x}")
    return 0 if terminated else 2


def cmd_bench(args) -> int:
    if args.steps < 1000:
        print("error: bench needs --steps >= 1000", file=sys.stderr)
        return 1
    report = bench_once(args.task, args.grid_size, args.steps, args.action_mode,
                        seed=args.seed)
    print(f"single instance: {report['steps']} steps in "
          f"{report['wall_time']:.3f}s -> {report['steps_per_second']:.0f} steps/s")
    reports = [report]
    if args.instances > 1:
        multi = bench_parallel(args.task, args.grid_size, args.steps,
                               args.action_mode, args.instances, seed=args.seed)
        print(f"{args.instances} instances: {multi['steps']} total steps in "
              f"{multi['wall_time']:.3f}s -> {multi['steps_per_second']:.0f} steps/s aggregate")
        reports.append(multi)
    print(json.dumps(reports))
    return 0


def _bench_chooser(env: Environment, seed: int):
    """Primitive mode samples among currently valid actions; Cartesian mode
    samples uniformly over the task's space (failures are part of the cost)."""
    if env.config.action_mode == "primitive":
        agent = RandomAgent(seed)
        return lambda: int(agent.choose(env.world))
    rng = RandomAgent(seed).rng
    dimension = env.action_space().n
    return lambda: rng.randrange(dimension)


def bench_once(task: str, grid_size: int, steps: int, action_mode: str = "primitive",
               seed: int = 0) -> dict:
    """Single instance, single thread; measures the full per-step cost
    (action, transitions, reward, observation encoding) under random
    actions."""
    config = EnvConfig(task=task, action_mode=action_mode,
                       grid=(grid_size, grid_size), seed=seed,
                       max_steps=steps + 1)
    env = Environment(config)
    env.reset()
    choose = _bench_chooser(env, seed)
    threads_before = threading.active_count()
    done = 0
    start = time.perf_counter()
    while done < steps:
        env.step(choose())
        done += 1
        if env.finished:
            env.reset()
    wall = time.perf_counter() - start
    assert threading.active_count() == threads_before, \
        "bench single-instance mode must not spawn threads"
    return {
        "task": task, "grid": grid_size, "action_mode": action_mode,
        "steps": done, "wall_time": wall, "steps_per_second": done / wall,
        "instances": 1,
    }


def bench_parallel(task: str, grid_size: int, steps: int, action_mode: str,
                   instances: int, seed: int = 0) -> dict:
    def worker(idx: int):
        config = EnvConfig(task=task, action_mode=action_mode,
                           grid=(grid_size, grid_size), seed=seed + idx,
                           max_steps=steps + 1)
        env = Environment(config)
        env.reset()
        choose = _bench_chooser(env, seed + idx)
        for _ in range(steps):
            env.step(choose())
            if env.finished:
                env.reset()

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(instances)]
    start = time.perf_counter()
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    wall = time.perf_counter() - start
    total = steps * instances
    return {
        "task": task, "grid": grid_size, "action_mode": action_mode,
        "steps": total, "wall_time": wall, "steps_per_second": total / wall,
        "instances": instances,
    }


def cmd_replay(args) -> int:
    try:
        record = DemoRecord.load(args.path)
    except (OSError, ValueError, KeyError, DemoError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        replay(record)
    except HashMismatch as e:
        print(f"replay mismatch: {e}", file=sys.stderr)
        return 3
    print(f"replay ok: {len(record.actions)} steps, "
          f"total reward {sum(record.rewards)}")
    return 0


def _read_keys(stream):
    """Yield logical key names from a character stream (handles arrows)."""
    buf = ""
    while True:
        ch = stream.read(1)
        if not ch:
            return
        buf += ch
        if buf in _ARROW_SEQ:
            yield _ARROW_SEQ[buf]
            buf = ""
        elif buf.startswith("\x1b"):
            if len(buf) >= 3:
                buf = ""  # unknown escape
            continue
        else:
            yield buf
            buf = ""


def cmd_manual(args) -> int:
    try:
        config = _build_config(args)
        env = Environment(config)
    except (TaskError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    env.reset()
    bindings = {key: action for key, action in KEY_BINDINGS}
    record = DemoRecord(task=env.task.name, config=env.effective_config(),
                        controller="human")

    print("manual control -- keys:")
    for entry in action_legend():
        print(f"  {'/'.join(entry['keys'])}: {entry['name']}")
    print("  q: quit")
    print(render_ascii(env.world))

    interactive = sys.stdin.isatty()
    if interactive:
        import termios
        import tty
        fd = sys.stdin.fileno()
        saved = termios.tcgetattr(fd)
        tty.setcbreak(fd)
    total = 0.0
    try:
        for key in _read_keys(sys.stdin):
            if key in QUIT_KEYS:
                break
            action = bindings.get(key)
            if action is None:
                print(f"unbound key {key!r}")
                continue
            result = env.step(int(action))
            record.append(int(action), result.reward)
            total += result.reward
            outcome = result.info["action_outcome"]
            if not outcome["succeeded"]:
                print(f"action {action.name} failed: {outcome['reason']}")
            print(render_ascii(env.world))
            print(f"step {env.world.step_count} reward {result.reward} "
                  f"carrying {env.world.agent.carrying}")
            if result.terminated:
                print("goal reached!")
                break
            if result.truncated:
                print("time limit reached")
                break
    finally:
        if interactive:
            termios.tcsetattr(fd, termios.TCSADRAIN, saved)
    record.finalize(env.world)
    if args.record:
        record.save(args.record)
        print(f"demo written to {args.record}")
    print(f"episode summary: steps={env.world.step_count} reward={total}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_tasks(args) -> int:
    for name, task in load_task_library().items():
        milestones = len(task.milestones) if task.milestones else 0
        print(f"{name}: grid {task.config.grid[0]}x{task.config.grid[1]}, "
              f"rooms {task.config.rooms}, entities {len(task.entities)}, "
              f"milestones {milestones}")
    return 0


def _add_env_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--task", required=True, help="task name or file path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-size", type=int, default=None)
    p.add_argument("--rooms", type=int, default=None)
    p.add_argument("--layout", default=None)
    p.add_argument("--action-mode", choices=("primitive", "cartesian"),
                   default="primitive")
    p.add_argument("--obs-mode", choices=("partial", "full"), default="partial")
    p.add_argument("--reward-mode", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--max-steps", type=int, default=1000)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gridhouse",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one episode with an agent")
    _add_env_flags(p)
    p.add_argument("--agent", default="random",
                   help="random, bfs, or scripted[:name]")
    p.add_argument("--record", default=None, help="write a demo file")
    p.add_argument("--dump-obs", default=None,
                   help="write the episode's observation bytes")
    p.add_argument("--log", action="store_true", help="per-step log")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="measure step throughput")
    p.add_argument("--task", default="installing_a_printer")
    p.add_argument("--grid-size", type=int, default=10)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--action-mode", choices=("primitive", "cartesian"),
                   default="primitive")
    p.add_argument("--instances", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("replay", help="verify a recorded demo")
    p.add_argument("path")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("manual", help="keyboard control in the terminal")
    _add_env_flags(p)
    p.add_argument("--record", default=None)
    p.set_defaults(func=cmd_manual)

    p = sub.add_parser("record", help="manual control, demo file required")
    _add_env_flags(p)
    p.add_argument("--record", required=True)
    p.set_defaults(func=cmd_manual)

    p = sub.add_parser("serve", help="start the interactive session server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8732)
    p.add_argument("--static", default=None,
                   help="directory of built web-client files to serve")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("tasks", help="list the task library")
    p.set_defaults(func=cmd_tasks)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
