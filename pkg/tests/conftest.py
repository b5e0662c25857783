import time
from functools import lru_cache

import pytest

from dogwalk import scenarios
from dogwalk.engine import Mode, run

SESSION_START = time.perf_counter()


@lru_cache(maxsize=None)
def builtin_run(name, mode):
    """Run a built-in scenario once per session; returns (scenario, outcome, metrics, seconds)."""
    sc = scenarios.builtin(name, Mode(mode))
    t0 = time.perf_counter()
    out = run(sc.world, sc.configs, sc.mode)
    elapsed = time.perf_counter() - t0
    return sc, out, scenarios.metrics(out, sc.world), elapsed


@pytest.fixture
def simulate():
    return builtin_run
