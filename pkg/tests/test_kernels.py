import math

import pytest
from hypothesis import given, settings, strategies as st

from dogwalk import _pykernels, kernels, scenarios
from dogwalk.engine import run

compiled = pytest.importorskip("dogwalk._kernels")

coord = st.floats(0.05, 9.95)
angle = st.floats(-4.0, 4.0)


def packed_for(mod, world):
    circles = [(o.center[0], o.center[1], o.radius) for o in world.obstacles if hasattr(o, "radius")]
    boxes = [o.bounds() for o in world.obstacles if not hasattr(o, "radius")]
    return mod.pack_obstacles(circles, boxes)


WORLD = scenarios.builtin("obscured_tank").world
PY, CY = packed_for(_pykernels, WORLD), packed_for(compiled, WORLD)


@settings(max_examples=300, deadline=None)
@given(coord, st.floats(0.05, 3.95), angle, st.floats(0.1, 1.5), st.floats(0.1, 5.0))
def test_cone_range_parity(x, y, heading, half, max_range):
    a = _pykernels.cone_range(x, y, heading, half, max_range, PY)
    b = compiled.cone_range(x, y, heading, half, max_range, CY)
    assert a == pytest.approx(b, abs=1e-12) or (math.isinf(a) and math.isinf(b))


@settings(max_examples=300, deadline=None)
@given(coord, st.floats(0.05, 3.95))
def test_clearance_parity(x, y):
    assert _pykernels.clearance(x, y, PY) == pytest.approx(compiled.clearance(x, y, CY), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.floats(-50, 50))
def test_wrap_angle_parity(a):
    assert _pykernels.wrap_angle(a) == pytest.approx(compiled.wrap_angle(a), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6), st.lists(st.floats(-1, 1), min_size=6, max_size=6),
       angle)
def test_integrate_parity(vel, cmd, yaw):
    args = (1.0, 2.0, -1.0, yaw, tuple(vel), tuple(cmd), (0.5,) * 6, (1, 1, 1, 0, 0, 1), 0.02)
    a, b = _pykernels.integrate(*args), compiled.integrate(*args)
    assert a[:4] == pytest.approx(b[:4], abs=1e-12)
    assert a[4] == pytest.approx(b[4], abs=1e-12)


def test_backends_give_the_same_run():
    sc = scenarios.builtin("case3")
    prev = kernels.set_backend("python")
    try:
        slow = run(sc.world, sc.configs, sc.mode)
    finally:
        kernels.set_backend(prev)
    fast = run(sc.world, sc.configs, sc.mode)
    assert slow.status == fast.status
    assert slow.final_time == pytest.approx(fast.final_time)
    assert slow.trace[-1].asv.x == pytest.approx(fast.trace[-1].asv.x, abs=1e-9)


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
