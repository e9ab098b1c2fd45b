import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
DEFAULT_PRESET = REPO_ROOT / "presets" / "default.preset"

# spectrum panels use {0, 4, 6, 8} MHz, the delay panel {4, 4.30, 4.90, 4.93}
ALL_GC_MHZ = (0.0, 4.0, 4.30, 4.90, 4.93, 6.0, 8.0)


def run_sweep_cli(preset: Path, gc_mhz: float, out: Path) -> None:
    """Produce one sweep CSV through the upstream command-line interface."""
    cmd = [sys.executable, "-m", "magnomit.cli", "spectrum",
           "--config", str(preset), "--gc", str(gc_mhz * 1e6),
           "--out", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


@pytest.fixture(scope="session")
def sweep_csvs(tmp_path_factory):
    """Shipped-preset sweep tables for the four-curve panels."""
    root = tmp_path_factory.mktemp("sweeps")
    paths = {}
    for gc in ALL_GC_MHZ:
        out = root / f"gc_{gc:.2f}MHz.csv"
        run_sweep_cli(DEFAULT_PRESET, gc, out)
        paths[gc] = out
    return paths


@pytest.fixture(scope="session")
def omega_b_rad_s():
    import math
    return 2.0 * math.pi * 40e6
