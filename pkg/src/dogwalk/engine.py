"""Fixed-step co-simulation of the two vehicles.

Each step: both agents sense the previous step's states, each computes its
command from its own sensors and protocol state only, then both are
integrated. The two agents share nothing except what their sensors observe.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .control import (AvoidanceConfig, DepthHoldConfig, IbvsConfig, PlannerConfig,
                      avoidance_command, depth_hold_command, ibvs_command, planner_command)
from .dynamics import ASV, AUV, ZERO_CMD, ControlInput, DynamicsParams, RobotState, step
from .paradigm import (ParadigmConfig, ParadigmState, compose_asv, compose_auv, detect_level2,
                       level2_indicator, update_weighting)
from .perception import (DOWN, UP, CameraModel, ImageObservation, SonarConfig, SonarReading,
                         observe_relative_yaw, observe_tag, read_sonar, read_wall_distance)
from .world import WorldModel, collides


class Mode(str, enum.Enum):
    BASELINE = "Baseline"
    DOG_WALKING = "DogWalking"


class Status(str, enum.Enum):
    TARGET_REACHED = "TargetReached"
    STUCK = "Stuck"
    COLLISION = "Collision"
    FORMATION_BROKEN = "FormationBroken"
    TIMEOUT = "Timeout"


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.02
    protocol_rate_hz: float = 1.0
    max_time_s: float = 120.0
    asv_radius: float = 0.25
    auv_radius: float = 0.25
    formation_grace_steps: int = 5
    seed: int = 0
    stuck_window_s: float = 10.0
    stuck_epsilon_m: float = 0.05
    pixel_noise_px: float = 0.0
    range_noise_m: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0 < self.protocol_rate_hz <= 1.0 / self.dt:
            raise ValueError("protocol rate must be positive and no faster than the physics rate")
        ratio = 1.0 / (self.dt * self.protocol_rate_hz)
        if abs(ratio - round(ratio)) > 1e-6:
            raise ValueError("protocol rate must divide the physics rate")
        if not self.max_time_s > 0:
            raise ValueError("max_time_s must be positive")
        if not (self.asv_radius > 0 and self.auv_radius > 0):
            raise ValueError("footprint radii must be positive")
        if self.formation_grace_steps < 0:
            raise ValueError("formation_grace_steps must be >= 0")
        if not 0 < self.stuck_window_s < self.max_time_s:
            raise ValueError("stuck window must be positive and shorter than max_time_s")
        if not self.stuck_epsilon_m > 0:
            raise ValueError("stuck_epsilon_m must be positive")
        if self.pixel_noise_px < 0 or self.range_noise_m < 0:
            raise ValueError("noise levels must be non-negative")

    @property
    def protocol_every(self) -> int:
        return int(round(1.0 / (self.dt * self.protocol_rate_hz)))


@dataclass(frozen=True)
class Configs:
    """Every tunable of one simulation, grouped by subsystem."""

    planner: PlannerConfig
    sim: SimConfig = SimConfig()
    asv_dynamics: DynamicsParams = DynamicsParams(saturation=(0.3, 0.3, 0.0, 0.0, 0.0, 1.5))
    auv_dynamics: DynamicsParams = DynamicsParams(saturation=(0.3, 0.3, 0.3, 0.5, 0.5, 1.0))
    camera: CameraModel = CameraModel()
    sonar: SonarConfig = SonarConfig()
    asv_ibvs: IbvsConfig = IbvsConfig(looking=DOWN)
    auv_ibvs: IbvsConfig = IbvsConfig(gain_u=0.0002, looking=UP)
    avoidance: AvoidanceConfig = AvoidanceConfig()
    depth_hold: DepthHoldConfig = DepthHoldConfig()
    paradigm: ParadigmConfig = ParadigmConfig()

    def __post_init__(self):
        for name in ("asv_dynamics", "auv_dynamics"):
            if abs(getattr(self, name).dt - self.sim.dt) > 1e-15:
                raise ValueError(f"{name}.dt must equal sim.dt")
        if self.asv_ibvs.looking != DOWN or self.auv_ibvs.looking != UP:
            raise ValueError("surface camera must look down and underwater camera up")


@dataclass(frozen=True)
class TraceRecord:
    t: float
    asv: RobotState
    auv: RobotState
    asv_view: ImageObservation  # what the surface vehicle sees (underwater tag)
    auv_view: ImageObservation  # what the underwater vehicle sees (surface tag)
    sonar: SonarReading
    wall_distance: float
    relative_yaw: float
    planner: ControlInput
    asv_ibvs: ControlInput
    auv_ibvs: ControlInput
    avoidance: ControlInput
    depth_hold: ControlInput
    yank: float
    asv_cmd: ControlInput
    auv_cmd: ControlInput
    k_p: float
    k_v: float
    lam: int
    mu: Optional[int]
    yank_active: bool
    yank_started: bool
    target_captured: bool

    @property
    def level(self) -> int:
        if self.yank_active:
            return 2
        if self.k_p != self.k_v or not self.avoidance.is_zero():
            return 1
        return 0

    @property
    def in_formation(self) -> bool:
        return self.asv_view.in_view and self.auv_view.in_view


@dataclass
class SimOutcome:
    status: Status
    final_time: float
    trace: List[TraceRecord] = field(repr=False)
    mode: Mode = Mode.DOG_WALKING


def detect_stuck(tail: Sequence[TraceRecord], window: float, epsilon: float) -> bool:
    """Both robots stayed within ``epsilon`` of where they were ``window`` seconds ago."""
    if not tail:
        return False
    last = tail[-1]
    if last.target_captured:
        return False
    start_t = last.t - window
    if tail[0].t > start_t + 1e-9:
        return False
    # find the record at the start of the window
    i = len(tail) - 1
    while i > 0 and tail[i - 1].t >= start_t - 1e-9:
        i -= 1
    ref = tail[i]
    eps2 = epsilon * epsilon
    for rec in reversed(tail[i:]):
        if ((rec.asv.x - ref.asv.x) ** 2 + (rec.asv.y - ref.asv.y) ** 2 >= eps2
                or (rec.auv.x - ref.auv.x) ** 2 + (rec.auv.y - ref.auv.y) ** 2 >= eps2):
            return False
    return True


def check_termination(world: WorldModel, asv: RobotState, auv: RobotState,
                      trace: Sequence[TraceRecord], cfg: Configs,
                      out_of_view_run: int) -> Optional[Status]:
    """First matching status in priority order, or None to keep stepping."""
    sim = cfg.sim
    if (collides(auv.xy, sim.auv_radius, world)
            or collides(asv.xy, sim.asv_radius, world, obstacles=False)):
        return Status.COLLISION
    if out_of_view_run > sim.formation_grace_steps:
        return Status.FORMATION_BROKEN
    if trace:
        last = trace[-1]
        if last.target_captured and last.in_formation:
            return Status.TARGET_REACHED
        if detect_stuck(trace, sim.stuck_window_s, sim.stuck_epsilon_m):
            return Status.STUCK
        if last.t >= sim.max_time_s - 1e-9:
            return Status.TIMEOUT
    return None


def initial_states(world: WorldModel, cfg: Configs):
    heading = cfg.planner.heading
    asv = RobotState(ASV, world.asv_start[0], world.asv_start[1], 0.0, yaw=heading)
    auv = RobotState(AUV, world.auv_start[0], world.auv_start[1], world.auv_hold_depth,
                     yaw=heading)
    return asv, auv


def run(world: WorldModel, cfg: Configs, mode: Mode = Mode.DOG_WALKING) -> SimOutcome:
    mode = Mode(mode)
    sim = cfg.sim
    rng = np.random.default_rng(sim.seed)
    noisy = sim.pixel_noise_px > 0 or sim.range_noise_m > 0
    asv, auv = initial_states(world, cfg)
    state = ParadigmState.initial(cfg.paradigm, cfg.avoidance.lam)
    weighting, level2, detector, lam = state.weighting, state.level2, state.detector, state.lam
    waypoint = 0
    goal = cfg.planner.goal
    trace: List[TraceRecord] = []
    oov_run = 0
    n_max = int(math.ceil(sim.max_time_s / sim.dt - 1e-9))
    every = sim.protocol_every

    for k in range(n_max + 1):
        t = k * sim.dt
        # sense
        r = rng if noisy else None
        asv_view = observe_tag(asv, auv, cfg.camera, DOWN, t, r, sim.pixel_noise_px)
        auv_view = observe_tag(auv, asv, cfg.camera, UP, t, r, sim.pixel_noise_px)
        sonar = read_sonar(auv, world, cfg.sonar.cone_half_angle, cfg.sonar.max_range, t, r,
                           sim.range_noise_m)
        d_w = read_wall_distance(asv, world)
        rel_yaw = observe_relative_yaw(auv, asv, t)

        # decide: surface vehicle
        planner, waypoint = planner_command(asv, cfg.planner, waypoint)
        asv_ibvs = ibvs_command(asv_view, cfg.asv_ibvs) if asv_view.in_view else ZERO_CMD
        yank = 0.0
        started = False
        if mode is Mode.DOG_WALKING:
            if k % every == 0:
                weighting = update_weighting(weighting, asv_view.region, t)
            previous_until = level2.active_until
            yank, level2 = level2_indicator(level2, d_w, asv_view.region, t)
            started = level2.active_until != previous_until
        asv_cmd = compose_asv(planner, asv_ibvs, yank, weighting, cfg.asv_dynamics)

        # decide: underwater vehicle
        if mode is Mode.DOG_WALKING:
            update, detector = detect_level2(detector, rel_yaw)
            if update is not None:
                lam = update
        auv_ibvs = ibvs_command(auv_view, cfg.auv_ibvs) if auv_view.in_view else ZERO_CMD
        avoid = avoidance_command(sonar, cfg.avoidance, lam)
        depth = depth_hold_command(auv, cfg.depth_hold)
        auv_cmd = compose_auv(avoid, auv_ibvs, depth, cfg.auv_dynamics)

        oov_run = 0 if (asv_view.in_view and auv_view.in_view) else oov_run + 1
        captured = (waypoint == len(cfg.planner.waypoints) - 1
                    and math.dist(asv.xy, goal) <= cfg.planner.capture_radius)
        trace.append(TraceRecord(
            t=t, asv=asv, auv=auv, asv_view=asv_view, auv_view=auv_view, sonar=sonar,
            wall_distance=d_w, relative_yaw=rel_yaw.value, planner=planner,
            asv_ibvs=asv_ibvs, auv_ibvs=auv_ibvs, avoidance=avoid, depth_hold=depth,
            yank=yank, asv_cmd=asv_cmd, auv_cmd=auv_cmd, k_p=weighting.k_p,
            k_v=weighting.k_v, lam=lam, mu=level2.mu, yank_active=level2.active(t),
            yank_started=started, target_captured=captured))

        status = check_termination(world, asv, auv, trace, cfg, oov_run)
        if status is not None:
            return SimOutcome(status, t, trace, mode)

        # act
        asv = step(asv, asv_cmd, cfg.asv_dynamics)
        auv = step(auv, auv_cmd, cfg.auv_dynamics)

    return SimOutcome(Status.TIMEOUT, trace[-1].t, trace, mode)
