"""Manual control driven through a real pseudo-terminal: exercises the
cbreak/raw-mode path rather than the piped-stdin fallback."""

import json
import os
import pty
import select
import subprocess
import sys
import time
from pathlib import Path

ROOT = Path(__file__).parent.parent
FIXTURES = Path(__file__).parent / "fixtures"

ARROW_BYTES = {"Up": b"\x1b[A", "Left": b"\x1b[D", "Right": b"\x1b[C"}


def test_manual_solves_printer_through_pty(tmp_path):
    keys = json.loads((FIXTURES / "ui_keyboard_sequence.json").read_text())
    demo = tmp_path / "pty_demo.txt"
    controller, follower = pty.openpty()
    proc = subprocess.Popen(
        [sys.executable, "-m", "gridhouse.cli", "manual",
         "--task", "installing_a_printer", "--seed", str(keys["seed"]),
         "--record", str(demo)],
        stdin=follower, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
        cwd=ROOT)
    os.close(follower)
    try:
        time.sleep(1.0)  # let the env generate and the legend print
        for key in keys["keys"]:
            os.write(controller, ARROW_BYTES.get(key, key.encode()))
            time.sleep(0.02)
        os.write(controller, b"q")
        out, err = proc.communicate(timeout=30)
    finally:
        os.close(controller)
        if proc.poll() is None:
            proc.kill()
    assert proc.returncode == 0, err.decode()
    text = out.decode()
    assert "goal reached!" in text
    assert "reward=1.0" in text
    assert demo.exists()
    replay = subprocess.run(
        [sys.executable, "-m", "gridhouse.cli", "replay", str(demo)],
        capture_output=True, text=True, cwd=ROOT)
    assert replay.returncode == 0, replay.stderr
