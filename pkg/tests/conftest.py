import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mfn_hrrp.core import RangeProfile  # noqa: E402


def profile(cells, aspect=0.0, ship_id="s", length=100.0, width=20.0, delta_r=1.0):
    return RangeProfile(np.asarray(cells, dtype=float), aspect, delta_r, ship_id, length, width)


def pulse(start=100, stop=150, amp=10.0, s=256, **kw):
    x = np.zeros(s)
    x[start:stop + 1] = amp
    return profile(x, **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
