import os
import subprocess
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))


def run_verify(args, cwd=None):
    return subprocess.run([sys.executable, "-m", "causalnets.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="session")
def full_runs(tmp_path_factory):
    """Two concurrent `verify all --seed 7 --out out` runs from separate working directories.

    Returns [(out_dir, returncode, stdout, stderr, seconds), ...].
    """
    base = tmp_path_factory.mktemp("verify_all")
    cwds = [base / "run1", base / "run2"]
    for c in cwds:
        c.mkdir()
    t0 = time.perf_counter()
    procs = [subprocess.Popen([sys.executable, "-m", "causalnets.cli", "all", "--seed", "7", "--out", "out"], cwd=c,
                              stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True) for c in cwds]
    results = []
    for c, p in zip(cwds, procs):
        out, err = p.communicate()
        results.append((c / "out", p.returncode, out, err, time.perf_counter() - t0))
    return results
