import json
import subprocess
import sys
from pathlib import Path

import pytest

from gridhouse.demo import (DemoRecord, HashMismatch, VersionMismatch,
                            record_episode, replay)
from gridhouse.env import EnvConfig, Environment
from gridhouse.agents import scripted_actions
from gridhouse.cli import main as cli_main

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*argv, input_text=None):
    proc = subprocess.run(
        [sys.executable, "-m", "gridhouse.cli", *argv],
        capture_output=True, text=True, input=input_text,
        cwd=Path(__file__).parent.parent)
    return proc


# -- demo record/replay (API level) ------------------------------------------------

def test_record_then_replay_roundtrip(tmp_path):
    env = Environment(EnvConfig(task="installing_a_printer", seed=3))
    env.reset()
    actions = scripted_actions(env.task, env.world)
    record = record_episode(env, actions, controller="scripted")
    path = tmp_path / "demo.txt"
    record.save(path)
    loaded = DemoRecord.load(path)
    assert loaded.actions == record.actions
    assert loaded.rewards == record.rewards
    assert loaded.final_hash == record.final_hash
    replay(loaded)  # no exception


def test_tampered_action_detected(tmp_path):
    record = DemoRecord.load(FIXTURES / "demo_scripted_printer.txt")
    record.actions[0] = (record.actions[0] + 1) % 15
    with pytest.raises(HashMismatch):
        replay(record)


def test_version_mismatch_rejected(tmp_path):
    text = (FIXTURES / "demo_scripted_printer.txt").read_text()
    lines = text.splitlines()
    header = json.loads(lines[0])
    header["version"] = 99
    lines[0] = json.dumps(header, sort_keys=True)
    with pytest.raises(VersionMismatch):
        DemoRecord.loads("\n".join(lines))


def test_fixture_demos_replay_clean():
    for name in ("demo_scripted_printer.txt", "demo_washing_dense.txt",
                 "demo_random_walk.txt", "demo_ui_keyboard.txt"):
        replay(DemoRecord.load(FIXTURES / name))


def test_demo_text_is_line_delimited():
    text = (FIXTURES / "demo_scripted_printer.txt").read_text()
    lines = text.strip().splitlines()
    header = json.loads(lines[0])
    assert header["format"] == "gridhouse-demo"
    assert header["config"]["seed"] == 3
    steps = [json.loads(ln) for ln in lines[1:-1]]
    assert all(set(s) == {"action", "reward"} for s in steps)
    footer = json.loads(lines[-1])
    assert footer["steps"] == len(steps)


# -- CLI surface ----------------------------------------------------------------------

def test_cli_run_scripted_exit_zero(tmp_path):
    demo = tmp_path / "demo.txt"
    proc = run_cli("run", "--task", "installing_a_printer", "--agent", "scripted",
                   "--seed", "3", "--record", str(demo))
    assert proc.returncode == 0, proc.stderr
    assert "cause=goal" in proc.stdout
    assert demo.exists()
    proc2 = run_cli("replay", str(demo))
    assert proc2.returncode == 0, proc2.stderr


def test_cli_run_scripted_named_form():
    proc = run_cli("run", "--task", "installing_a_printer",
                   "--agent", "scripted:printer", "--seed", "3")
    assert proc.returncode == 0, proc.stderr
    assert "cause=goal" in proc.stdout


def test_cli_run_random_truncates_exit_two():
    proc = run_cli("run", "--task", "installing_a_printer", "--agent", "random",
                   "--seed", "3", "--max-steps", "50")
    assert proc.returncode == 2
    assert "cause=time-limit" in proc.stdout


def test_cli_unknown_task_exit_one():
    proc = run_cli("run", "--task", "nonsense", "--agent", "random")
    assert proc.returncode == 1
    assert "nonsense" in proc.stderr


def test_cli_unknown_agent_exit_one():
    proc = run_cli("run", "--task", "installing_a_printer", "--agent", "psychic")
    assert proc.returncode == 1


def test_cli_replay_detects_tamper(tmp_path):
    text = (FIXTURES / "demo_scripted_printer.txt").read_text()
    lines = text.splitlines()
    step = json.loads(lines[1])
    step["action"] = (step["action"] + 1) % 15
    lines[1] = json.dumps(step, sort_keys=True)
    bad = tmp_path / "tampered.txt"
    bad.write_text("\n".join(lines) + "\n")
    proc = run_cli("replay", str(bad))
    assert proc.returncode == 3
    assert "mismatch" in proc.stderr.lower()


def test_cli_replay_missing_file_exit_one(tmp_path):
    proc = run_cli("replay", str(tmp_path / "missing.txt"))
    assert proc.returncode == 1


def test_cli_dump_obs(tmp_path):
    out = tmp_path / "obs.bin"
    proc = run_cli("run", "--task", "installing_a_printer", "--agent", "scripted",
                   "--seed", "1", "--dump-obs", str(out))
    assert proc.returncode == 0
    data = out.read_bytes()
    assert len(data) % (7 * 7 * 31) == 0 and len(data) > 0


def test_cli_bench_reports_rate():
    proc = run_cli("bench", "--steps", "2000")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout.strip().splitlines()[-1])[0]
    assert report["steps"] == 2000
    assert report["steps_per_second"] == pytest.approx(
        report["steps"] / report["wall_time"])


def test_cli_bench_rejects_tiny_step_count():
    proc = run_cli("bench", "--steps", "10")
    assert proc.returncode == 1


def test_cli_bench_parallel_row():
    proc = run_cli("bench", "--steps", "1000", "--instances", "2")
    assert proc.returncode == 0, proc.stderr
    reports = json.loads(proc.stdout.strip().splitlines()[-1])
    assert len(reports) == 2
    assert reports[1]["instances"] == 2
    assert reports[1]["steps"] == 2000


def test_cli_tasks_lists_20():
    proc = run_cli("tasks")
    assert proc.returncode == 0
    assert len(proc.stdout.strip().splitlines()) == 20


def test_bfs_demo_with_grid_override_replays(tmp_path):
    demo = tmp_path / "bfs_demo.txt"
    proc = run_cli("run", "--task", "installing_a_printer", "--agent", "bfs",
                   "--seed", "0", "--grid-size", "6", "--record", str(demo))
    assert proc.returncode == 0, proc.stderr
    record = DemoRecord.load(demo)
    assert record.config.grid == (6, 6)  # grid override persists in the file
    proc2 = run_cli("replay", str(demo))
    assert proc2.returncode == 0, proc2.stderr


# -- manual control through piped stdin ----------------------------------------------

ARROW_BYTES = {"Up": "\x1b[A", "Left": "\x1b[D", "Right": "\x1b[C"}


def test_manual_scripted_keys_solve_printer(tmp_path):
    keys = json.loads((FIXTURES / "ui_keyboard_sequence.json").read_text())
    assert keys["task"] == "installing_a_printer"
    feed = "".join(ARROW_BYTES.get(k, k) for k in keys["keys"])
    demo = tmp_path / "manual_demo.txt"
    proc = run_cli("manual", "--task", "installing_a_printer", "--seed",
                   str(keys["seed"]), "--record", str(demo), input_text=feed)
    assert proc.returncode == 0, proc.stderr
    assert "goal reached!" in proc.stdout
    assert "reward=1.0" in proc.stdout
    proc2 = run_cli("replay", str(demo))
    assert proc2.returncode == 0, proc2.stderr


def test_manual_invalid_key_warns_world_unchanged(tmp_path):
    demo = tmp_path / "demo.txt"
    proc = run_cli("manual", "--task", "installing_a_printer", "--seed", "3",
                   "--record", str(demo), input_text="z!q")
    assert proc.returncode == 0
    assert "unbound key" in proc.stdout
    record = DemoRecord.load(demo)
    assert record.actions == []  # unbound keys never became actions


def test_manual_failed_action_reported(tmp_path):
    # seed 3 layout: immediately try slice with nothing ahead
    proc = run_cli("manual", "--task", "installing_a_printer", "--seed", "3",
                   input_text="sq")
    assert proc.returncode == 0
    assert "failed" in proc.stdout


def test_manual_quit_prints_summary():
    proc = run_cli("manual", "--task", "installing_a_printer", "--seed", "3",
                   input_text="q")
    assert proc.returncode == 0
    assert "episode summary" in proc.stdout


# -- in-process CLI entry (coverage of argparse wiring) --------------------------------

def test_main_entry_in_process(capsys, tmp_path):
    rc = cli_main(["tasks"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "installing_a_printer" in out
