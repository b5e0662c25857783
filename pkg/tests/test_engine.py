import math
from dataclasses import replace

import pytest

from dogwalk.control import PlannerConfig
from dogwalk.engine import Configs, Mode, SimConfig, Status, detect_stuck, run
from dogwalk.world import CircleObstacle, Tank, WorldModel

from conftest import builtin_run


def empty_world():
    return WorldModel(Tank(5, 4, 2.5), (), (0.75, 2.0), (4.25, 2.0), (0.75, 2.0))


def cfg_for(world, **sim):
    return Configs(planner=PlannerConfig(waypoints=(world.asv_target,)), sim=SimConfig(**sim))


def test_empty_world_reaches_target_without_protocol_events():
    w = empty_world()
    out = run(w, cfg_for(w))
    assert out.status is Status.TARGET_REACHED
    assert {r.lam for r in out.trace} == {1}
    assert not any(r.yank_active for r in out.trace)


def test_collision_has_priority():
    w = empty_world()
    w = replace(w, obstacles=(CircleObstacle((0.9, 2.0), 0.3),))
    out = run(w, cfg_for(w))
    assert out.status is Status.COLLISION
    assert out.final_time == 0.0


def test_formation_breaks_when_tag_lost():
    w = WorldModel(Tank(5, 4, 2.5), (), (0.75, 2.0), (4.25, 2.0), (0.75, 0.5))
    out = run(w, cfg_for(w, formation_grace_steps=3))
    assert out.status is Status.FORMATION_BROKEN
    assert len(out.trace) == 4


def test_timeout():
    w = empty_world()
    out = run(w, cfg_for(w, max_time_s=2.0, stuck_window_s=1.0))
    assert out.status is Status.TIMEOUT and out.final_time == pytest.approx(2.0)


def test_detect_stuck_examples():
    sc, out, _, _ = builtin_run("case2", "Baseline")
    tail = out.trace
    assert detect_stuck(tail, 10.0, 0.05)
    # a dither smaller than epsilon around the equilibrium still counts as stuck
    wobble = [replace(r, asv=replace(r.asv, x=r.asv.x + 0.02 * math.sin(7 * r.t))) for r in tail]
    assert detect_stuck(wobble, 10.0, 0.05)
    moving = [replace(r, asv=replace(r.asv, x=0.1 * r.t)) for r in tail]
    assert not detect_stuck(moving, 10.0, 0.05)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(protocol_rate_hz=0.3)
    with pytest.raises(ValueError):
        SimConfig(stuck_window_s=200.0)


def test_baseline_never_runs_the_protocol():
    _, out, _, _ = builtin_run("case3", "Baseline")
    assert not any(r.yank_active for r in out.trace)
    assert {r.lam for r in out.trace} == {1}
    assert {r.k_p for r in out.trace} == {1.0}


@pytest.mark.parametrize("name", ["case1", "case2", "case3", "obscured_tank"])
def test_trace_invariants(name):
    sc, out, _, _ = builtin_run(name, "DogWalking")
    cfg = sc.configs
    vmax = max(cfg.asv_dynamics.saturation[:2] + cfg.auv_dynamics.saturation[:2])
    step_max = math.sqrt(2) * vmax * cfg.sim.dt + 1e-12
    for a, b in zip(out.trace, out.trace[1:]):
        assert math.dist(a.asv.xy, b.asv.xy) <= step_max
        assert math.dist(a.auv.xy, b.auv.xy) <= step_max
    for r in out.trace:
        if r.level == 2:
            assert r.yank_active
        elif r.level == 1:
            assert r.k_p != r.k_v or not r.avoidance.is_zero()
        else:
            assert r.k_p == r.k_v and r.avoidance.is_zero() and not r.yank_active
        assert r.asv.z == 0.0 and r.auv.roll == 0.0 and r.auv.pitch == 0.0
    # yanks never overlap
    starts = [r.t for r in out.trace if r.yank_started]
    assert all(b - a >= cfg.paradigm.yank_duration - 1e-9 for a, b in zip(starts, starts[1:]))
    # lambda changes only during or right after a yank window
    for a, b in zip(out.trace, out.trace[1:]):
        if a.lam != b.lam:
            assert any(r.yank_active for r in out.trace if b.t - 2.0 <= r.t <= b.t)
