"""Every demo script runs to completion."""

import glob
import os
import subprocess
import sys

import pytest

DEMOS = sorted(
    glob.glob(os.path.join(os.path.dirname(__file__), "..", "demos", "0*.py"))
)


@pytest.mark.parametrize("script", DEMOS,
                         ids=[os.path.basename(p) for p in DEMOS])
def test_demo_runs(script):
    result = subprocess.run(
        [sys.executable, script], capture_output=True, text=True, timeout=120
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout.strip()
