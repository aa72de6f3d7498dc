import os
import subprocess
import sys
from pathlib import Path

from gridhouse.cli import bench_once

ROOT = Path(__file__).parent.parent


def test_doubling_steps_roughly_doubles_wall_time():
    bench_once("installing_a_printer", 10, 2000)  # warm caches
    small = bench_once("installing_a_printer", 10, 20_000)
    large = bench_once("installing_a_printer", 10, 40_000)
    ratio = large["wall_time"] / small["wall_time"]
    assert 1.5 <= ratio <= 2.5, ratio


def test_bench_self_consistency():
    report = bench_once("installing_a_printer", 10, 2000)
    assert report["steps_per_second"] == report["steps"] / report["wall_time"]
    assert report["instances"] == 1


def test_data_dir_env_override(tmp_path):
    # a copied data directory behaves identically through GRIDHOUSE_DATA
    import shutil
    src = ROOT / "src" / "gridhouse" / "data"
    shutil.copytree(src, tmp_path / "data")
    env = dict(os.environ, GRIDHOUSE_DATA=str(tmp_path / "data"),
               PYTHONPATH=str(ROOT / "src"))
    proc = subprocess.run(
        [sys.executable, "-c",
         "from gridhouse.tasks import load_task_library; "
         "print(len(load_task_library()))"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "20"


def test_record_subcommand_requires_path(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gridhouse.cli", "record",
         "--task", "installing_a_printer", "--seed", "3"],
        capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode != 0  # --record is mandatory for `record`
    demo = tmp_path / "d.txt"
    proc = subprocess.run(
        [sys.executable, "-m", "gridhouse.cli", "record",
         "--task", "installing_a_printer", "--seed", "3",
         "--record", str(demo)],
        capture_output=True, text=True, input="q", cwd=ROOT)
    assert proc.returncode == 0, proc.stderr
    assert demo.exists()


def test_run_on_fixed_layout():
    proc = subprocess.run(
        [sys.executable, "-m", "gridhouse.cli", "run",
         "--task", "installing_a_printer", "--agent", "scripted",
         "--seed", "2", "--grid-size", "20", "--layout", "rs_int"],
        capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0, proc.stderr
    assert "cause=goal" in proc.stdout
