"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import itertools
import math
import os
import subprocess
import sys
import time

import pytest

from dogwalk import scenarios
from dogwalk.control import LEFT, RIGHT, AvoidanceConfig, avoidance_command
from dogwalk.dynamics import ASV, AUV, ControlInput, DynamicsParams, RobotState, step
from dogwalk.engine import Mode, Status, run
from dogwalk.export import trace_csv
from dogwalk.paradigm import (Level2Detector, Level2State, WeightingState, detect_level2,
                              level2_indicator, update_weighting)
from dogwalk.perception import (DOWN, CameraModel, Region, SonarReading, observe_relative_yaw,
                                observe_tag, read_wall_distance)
from dogwalk.scenarios import BUILTIN_NAMES
from dogwalk.world import Tank, WorldModel

from conftest import builtin_run

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_case1_both_modes(report):
    rows, ok = [], True
    for mode in ("Baseline", "DogWalking"):
        _, out, m, secs = builtin_run("case1", mode)
        good = out.status is Status.TARGET_REACHED and m.min_clearance > 0 and secs < 5.0
        ok &= good
        rows.append(f"{mode}={out.status.value} clr={m.min_clearance:.3f}m {secs:.2f}s")
    report(1, ok, "case1 " + "; ".join(rows) + " (need TargetReached, no contact, <5 s)")


def test_criterion_02_case2(report):
    _, base, _, _ = builtin_run("case2", "Baseline")
    _, dog, m, _ = builtin_run("case2", "DogWalking")
    ok = (base.status is Status.STUCK and dog.status is Status.TARGET_REACHED
          and m.weighting_activations >= 1 and m.yank_count == 0 and m.min_clearance > 0)
    report(2, ok, f"case2 Baseline={base.status.value} DogWalking={dog.status.value} "
                  f"activations={m.weighting_activations} yanks={m.yank_count}")


def test_criterion_03_case3(report):
    _, base, _, _ = builtin_run("case3", "Baseline")
    _, dog, m, _ = builtin_run("case3", "DogWalking")
    lams = [r.lam for r in dog.trace]
    flips = [(a, b) for a, b in zip(lams, lams[1:]) if a != b]
    ok = (dog.status is Status.TARGET_REACHED and flips == [(LEFT, RIGHT)] and m.yank_count >= 1
          and base.status is Status.STUCK)
    report(3, ok, f"case3 DogWalking={dog.status.value} flips={flips} yanks={m.yank_count} "
                  f"Baseline={base.status.value}")


def test_criterion_04_obscured_tank(report):
    sc, out, m, _ = builtin_run("obscured_tank", "DogWalking")
    grace = sc.configs.sim.formation_grace_steps
    floor = 1.0 - grace / len(out.trace)
    ok = (out.status is Status.TARGET_REACHED and m.obstacles_passed == ("A", "B", "C", "D")
          and m.min_clearance > 0 and m.formation_in_view_fraction >= floor)
    report(4, ok, f"obscured_tank {out.status.value} passed={''.join(m.obstacles_passed)} "
                  f"clr={m.min_clearance:.3f}m in-view={m.formation_in_view_fraction:.4f} "
                  f"(floor {floor:.4f})")


def test_criterion_05_avoidance_law(report):
    worst, sign_ok, monotone = 0.0, True, True
    alphas = [0.01, 0.05, 0.12, 0.2, 0.3, 0.5, 1.0]
    ds = [0.05 + 0.95 * i / 40 for i in range(41)]
    xi = 0.2
    for alpha in alphas:
        prev = math.inf
        for d in ds:
            for lam in (LEFT, RIGHT):
                cmd = avoidance_command(SonarReading(d, 3.0), AvoidanceConfig(alpha=alpha), lam)
                want = min(alpha / d, xi)
                worst = max(worst, abs(abs(cmd.x) - want), abs(abs(cmd.y) - want))
                sign_ok &= (cmd.y > 0) == (lam == LEFT) and cmd.x < 0
            mag = avoidance_command(SonarReading(d, 3.0), AvoidanceConfig(alpha=alpha)).planar_norm()
            monotone &= mag <= prev
            prev = mag
    ok = worst <= 1e-12 and sign_ok and monotone
    report(5, ok, f"avoidance grid {len(alphas)}x{len(ds)}x2: max error {worst:.1e} (tol 1e-12), "
                  f"lateral sign ok={sign_ok}, non-increasing={monotone}")


def test_criterion_06_weighting_windows(report):
    bad = []
    for window in itertools.product((0, 1), repeat=4):
        w = WeightingState(window_s=4.0, rate_hz=1.0)
        for t, k in enumerate(window):
            w = update_weighting(w, Region.INTEGRATION if k else Region.SAFE, float(t))
        if w.reduced != all(window) or (w.reduced and w.k_p != w.beta * w.k_v):
            bad.append(window)
    report(6, not bad, f"16 occupancy windows, reduction iff all-ones; mismatches={bad}")


class _SurfaceAgent:
    """Sees the underwater tag and the side walls; owns only its yank state."""

    def __init__(self):
        self.level2 = Level2State(safe_distance=0.5, yank_rate=1.0, duration=1.0)
        self.started = None

    def act(self, tag_region, wall_distance, t):
        yaw, self.level2 = level2_indicator(self.level2, wall_distance, tag_region, t)
        if yaw and self.started is None:
            self.started = t
        return ControlInput(yaw=yaw)


class _UnderwaterAgent:
    """Sees the surface vehicle's relative yaw; owns only its detector and lambda."""

    def __init__(self):
        self.detector = Level2Detector(threshold=0.5, lookback=1.0)
        self.lam = LEFT
        self.detected = None

    def act(self, rel_yaw):
        update, self.detector = detect_level2(self.detector, rel_yaw)
        if update is not None and self.detected is None:
            self.lam, self.detected = update, (rel_yaw.timestamp, update)
        return ControlInput()


def test_criterion_07_yank_closes_the_loop(report):
    world = WorldModel(Tank(5.0, 4.0, 2.5), (), (2.0, 3.6), (4.5, 3.6), (2.0, 2.75))
    cam, params, dt = CameraModel(), DynamicsParams(saturation=(0.3, 0.3, 0.0, 0.0, 0.0, 1.5)), 0.02
    asv = RobotState(ASV, 2.0, 3.6)
    auv = RobotState(AUV, 2.0, 2.75, -1.5)
    surface, under = _SurfaceAgent(), _UnderwaterAgent()
    first_region = observe_tag(asv, auv, cam, DOWN).region
    max_delta = 0.0
    yaw_at_start = None
    for k in range(int(3.0 / dt)):
        t = k * dt
        # each agent gets only its own sensor readings
        asv_cmd = surface.act(observe_tag(asv, auv, cam, DOWN, t).region, read_wall_distance(asv, world), t)
        under.act(observe_relative_yaw(auv, asv, t))
        if surface.started is not None:
            yaw_at_start = asv.yaw if yaw_at_start is None else yaw_at_start
            if t <= surface.started + 1.0 + 1e-9:
                max_delta = max(max_delta, abs(asv.yaw - yaw_at_start))
        asv = step(asv, asv_cmd, params)  # the underwater vehicle is held in place
    started, detected = surface.started, under.detected
    ok = (first_region is Region.INTEGRATION and started is not None and detected is not None
          and detected[0] - started <= 1.0 + 1e-9 and max_delta >= 0.5
          and under.lam == RIGHT and surface.level2.mu == -1)
    seen = "never" if detected is None else f"{detected[0]:.2f}"
    report(7, ok, f"tag={first_region.value} yank at t={started} mu={surface.level2.mu}, "
                  f"detected at t={seen} (need within 1 s), "
                  f"|dpsi|={max_delta:.3f} rad >= 0.5, lambda -> {under.lam:+d}")


def test_criterion_08_case2_equilibrium(report):
    sc, out, _, _ = builtin_run("case2", "Baseline")
    d_safe = sc.configs.avoidance.safe_distance
    best, start = 0.0, None
    for r in out.trace:
        total = r.avoidance + r.auv_ibvs
        held = (math.hypot(total.x, total.y) < 1e-3 and r.sonar.range is not None
                and r.sonar.range <= d_safe)
        if held:
            start = r.t if start is None else start
            best = max(best, r.t - start)
        else:
            start = None
    report(8, best >= 10.0, f"case2 Baseline longest cancellation window {best:.2f} s "
                            f"(need >= 10 s, residual < 1e-3 m/s, range <= {d_safe} m)")


def test_criterion_09_determinism(report):
    differing = []
    for name in BUILTIN_NAMES:
        for mode in ("Baseline", "DogWalking"):
            _, first, _, _ = builtin_run(name, mode)
            sc = scenarios.builtin(name, Mode(mode))
            again = run(sc.world, sc.configs, sc.mode)
            if trace_csv(first.trace).encode() != trace_csv(again.trace).encode():
                differing.append(f"{name}/{mode}")
    report(9, not differing, f"{2 * len(BUILTIN_NAMES)} builtin runs repeated; "
                             f"byte-different traces: {differing or 'none'}")


def test_criterion_10_full_suite_time(report):
    if os.environ.get("DOGWALK_INNER_SUITE"):
        pytest.skip("inner timing run")
    env = dict(os.environ, DOGWALK_INNER_SUITE="1")
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "tests"],
        cwd=ROOT, env=env, capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = elapsed < 60.0 and proc.returncode == 0
    report(10, ok, f"full suite (all builtins both modes, unit and property tests) "
                   f"{elapsed:.1f} s (need < 60 s): {tail}")
