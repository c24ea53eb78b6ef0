"""Builds the slice CSVs the render tests consume.

The cloud and slices come from the geohull CLI run as a subprocess; this
package never touches the geometry library directly.
"""

import math
import subprocess
import sys

import pytest

SEEDS = "0,3,0;4,5,1;-4,5,1"


def _run_cli(args, timeout=3600):
    proc = subprocess.run([sys.executable, "-m", "geohull.cli", *args],
                          capture_output=True, text=True, timeout=timeout)
    if proc.returncode != 0:
        pytest.fail(f"geohull {args[0]} exited {proc.returncode}: "
                    f"{proc.stderr.strip()}")
    return proc


@pytest.fixture(scope="session")
def canonical_slices(tmp_path_factory):
    """Reference cloud plus its two standard cuts: the symmetry axis
    through the low seed, and the arc through the two level-crossing
    base points."""
    root = tmp_path_factory.mktemp("slices")
    cloud = root / "cloud.csv"
    _run_cli(["hull", "--space", "h2xr", "--seeds", SEEDS,
              "--iterations", "2", "--res", "0.006", "--out", str(cloud)])
    axis = root / "axis_slice.csv"
    _run_cli(["slice", "--in", str(cloud), "--plane",
              f"0,3;0,{math.sqrt(41.0)}", "--plane-tol", "0.01",
              "--out", str(axis)])
    arc = root / "arc_slice.csv"
    _run_cli(["slice", "--in", str(cloud), "--plane", "1,4;-1,4",
              "--plane-tol", "0.01", "--out", str(arc)])
    return {"cloud": cloud, "axis": axis, "arc": arc}
