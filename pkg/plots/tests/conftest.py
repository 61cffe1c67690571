"""Shared fixtures and the fidelity-check summary hook.

The `sim_outputs` fixture produces a small but real output corpus by
invoking the simulator's command-line interface; the renderer is only
ever exercised against files, never against simulator internals.
"""

from __future__ import annotations

import shutil
import subprocess

import pytest

from plotfix import FIDELITY_RESULTS

SIM_CONFIG = """\
version: 1
seed: 99
model:
  n_agents: 40
  t_final: 300
output:
  metrics_stride: 100
  snapshot_ticks: [0, 300]
"""


@pytest.fixture(scope="session")
def sim_outputs(tmp_path_factory):
    """Run the simulator CLI once; returns the directory with run/, sweep/, conn/."""
    exe = shutil.which("opinionscape")
    if exe is None:
        pytest.skip("opinionscape CLI is not on PATH")
    root = tmp_path_factory.mktemp("sim")
    config = root / "config.yaml"
    config.write_text(SIM_CONFIG)

    def cli(*args: str) -> None:
        proc = subprocess.run([exe, *args], capture_output=True, text=True)
        assert proc.returncode == 0, f"opinionscape {args[0]} failed: {proc.stderr}"

    cli("run", "--config", str(config), "--output-dir", str(root / "run"))
    cli("sweep", "--config", str(config), "--resolution", "3", "--replicates", "2",
        "--output-dir", str(root / "sweep"))
    cli("connectivity", "--config", str(config), "--r-comm", "0.15,0.6",
        "--replicates", "2", "--output-dir", str(root / "conn"))
    return root


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not FIDELITY_RESULTS:
        return
    terminalreporter.section("plot fidelity")
    for name, passed, detail in FIDELITY_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}: {detail}")
