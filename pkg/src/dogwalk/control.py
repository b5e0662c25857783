"""Low-level controllers for both vehicles.

* visual tether (proportional pixel-error servo, saturated in the outer image band)
* obstacle repulsion on the underwater vehicle
* waypoint PD with slow heading hold on the surface vehicle
* depth/attitude hold on the underwater vehicle
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .dynamics import ZERO_CMD, ControlInput, RobotState, wrap_angle
from .perception import DOWN, UP, CameraModel, ImageObservation, Region, SonarReading

LEFT = 1
RIGHT = -1


def _sign(v: float) -> float:
    return (v > 0) - (v < 0)


def _clip(v: float, lim: float) -> float:
    return min(max(v, -lim), lim)


@dataclass(frozen=True)
class IbvsConfig:
    """Visual tether gains.

    Image columns (u) drive body y and image rows (v) drive body x. The
    lateral sign depends on whether the camera looks up or down.
    """

    gain_u: float = 0.0008
    gain_v: float = 0.001
    xi_max_x: float = 0.2
    xi_max_y: float = 0.2
    looking: str = DOWN
    camera: CameraModel = CameraModel()

    def __post_init__(self):
        if not (self.gain_u > 0 and self.gain_v > 0):
            raise ValueError("IBVS gains must be positive")
        if not (self.xi_max_x > 0 and self.xi_max_y > 0):
            raise ValueError("xi_max must be positive")
        if self.looking not in (UP, DOWN):
            raise ValueError(f"looking must be 'up' or 'down', got {self.looking!r}")

    @property
    def lateral_sign(self) -> int:
        return 1 if self.looking == UP else -1


def ibvs_command(obs: ImageObservation, cfg: IbvsConfig) -> ControlInput:
    """Planar command that moves the observer to re-centre the other robot's tag."""
    if obs.region is Region.OUT_OF_VIEW or obs.tag_pixel is None:
        raise ValueError("tag out of view: no visual tether command available")
    wc, hc = cfg.camera.center
    err_u = obs.tag_pixel[0] - wc
    err_v = obs.tag_pixel[1] - hc
    ux = -cfg.gain_v * err_v
    uy = cfg.lateral_sign * cfg.gain_u * err_u
    if obs.region is Region.SAFE:
        return ControlInput(x=_clip(ux, cfg.xi_max_x), y=_clip(uy, cfg.xi_max_y))
    return ControlInput(x=cfg.xi_max_x * _sign(ux), y=cfg.xi_max_y * _sign(uy))


@dataclass(frozen=True)
class AvoidanceConfig:
    # saturates the push over the whole active band (alpha = xi_max * safe_distance)
    alpha: float = 0.2
    safe_distance: float = 1.0
    lam: int = LEFT
    xi_max_x: float = 0.2
    xi_max_y: float = 0.2

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.safe_distance > 0:
            raise ValueError("safe_distance must be positive")
        if self.lam not in (LEFT, RIGHT):
            raise ValueError("lambda must be +1 (left) or -1 (right)")


def side_sign(lam: int) -> int:
    """Lateral sign for a direction selector: +1 (left) -> +y, -1 (right) -> -y."""
    if lam == LEFT:
        return 1
    if lam == RIGHT:
        return -1
    raise ValueError(f"lambda must be +1 or -1, got {lam!r}")


def avoidance_command(sonar: SonarReading, cfg: AvoidanceConfig, lam: int = None) -> ControlInput:
    """Back away from the obstacle and slide toward the side selected by lambda.

    Active only when the sonar range is within the safe distance; each axis is
    ``min(alpha / range, xi_max)``.
    """
    d = sonar.range
    if d is None:
        return ZERO_CMD
    if not d > 0:
        raise ValueError(f"sonar range must be positive, got {d}")
    if d > cfg.safe_distance:
        return ZERO_CMD
    lam = cfg.lam if lam is None else lam
    push = cfg.alpha / d
    return ControlInput(x=-min(push, cfg.xi_max_x), y=side_sign(lam) * min(push, cfg.xi_max_y))


@dataclass(frozen=True)
class PlannerConfig:
    waypoints: Tuple[Tuple[float, float], ...]
    kp: float = 0.5
    kd: float = 0.0
    capture_radius: float = 0.15
    max_speed: float = 0.2
    heading: float = 0.0
    heading_gain: float = 1.0
    heading_rate_max: float = 0.3

    def __post_init__(self):
        object.__setattr__(self, "waypoints",
                           tuple((float(p[0]), float(p[1])) for p in self.waypoints))
        if not self.waypoints:
            raise ValueError("planner needs at least one waypoint")
        if min(self.kp, self.kd, self.heading_gain, self.max_speed, self.heading_rate_max) < 0:
            raise ValueError("planner gains and limits must be non-negative")
        if not self.capture_radius > 0:
            raise ValueError("capture_radius must be positive")

    @property
    def goal(self) -> Tuple[float, float]:
        return self.waypoints[-1]


def planner_command(asv: RobotState, cfg: PlannerConfig, index: int = 0):
    """PD toward the current waypoint, expressed in the body frame.

    Returns ``(command, index)``; intermediate waypoints advance once inside
    the capture radius. Inside the capture radius of the final waypoint the
    command is zero.
    """
    last = len(cfg.waypoints) - 1
    index = min(index, last)
    while index < last and math.dist(asv.xy, cfg.waypoints[index]) <= cfg.capture_radius:
        index += 1
    wx, wy = cfg.waypoints[index]
    ex, ey = wx - asv.x, wy - asv.y
    if index == last and math.hypot(ex, ey) <= cfg.capture_radius:
        return ZERO_CMD, index
    c, s = math.cos(asv.yaw), math.sin(asv.yaw)
    vbx, vby = asv.velocity[0], asv.velocity[1]
    # world-frame velocity for the damping term
    vwx = c * vbx - s * vby
    vwy = s * vbx + c * vby
    # limits apply along the tank axes, so a yawed hull still tracks the plan
    gx = _clip(cfg.kp * ex - cfg.kd * vwx, cfg.max_speed)
    gy = _clip(cfg.kp * ey - cfg.kd * vwy, cfg.max_speed)
    yaw = cfg.heading_gain * wrap_angle(cfg.heading - asv.yaw)
    cmd = ControlInput(x=c * gx + s * gy, y=-s * gx + c * gy,
                       yaw=_clip(yaw, cfg.heading_rate_max))
    return cmd, index


@dataclass(frozen=True)
class DepthHoldConfig:
    target_depth: float = -1.5
    target_roll: float = 0.0
    target_pitch: float = 0.0
    kp_z: float = 1.0
    kd_z: float = 0.2
    kp_att: float = 1.0
    kd_att: float = 0.2

    def __post_init__(self):
        if min(self.kp_z, self.kd_z, self.kp_att, self.kd_att) < 0:
            raise ValueError("depth-hold gains must be non-negative")


def depth_hold_command(auv: RobotState, cfg: DepthHoldConfig) -> ControlInput:
    v = auv.velocity
    return ControlInput(
        z=cfg.kp_z * (cfg.target_depth - auv.z) - cfg.kd_z * v[2],
        roll=cfg.kp_att * wrap_angle(cfg.target_roll - auv.roll) - cfg.kd_att * v[3],
        pitch=cfg.kp_att * wrap_angle(cfg.target_pitch - auv.pitch) - cfg.kd_att * v[4],
    )
