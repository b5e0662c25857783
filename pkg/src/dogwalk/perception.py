"""Geometric stand-ins for the onboard sensors.

The mutual camera link is a pinhole projection along a vertical optical axis:
the underwater vehicle looks up, the surface vehicle looks down, and both
images have "forward" at the top. Sonar and the wall LiDAR reduce to single
range values computed from the world model.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .dynamics import RobotState, wrap_angle
from .world import WorldModel, distance_to_nearest_obstacle, signed_wall_distance

UP = "up"
DOWN = "down"


class Region(str, enum.Enum):
    SAFE = "Safe"
    INTEGRATION = "Integration"
    OUT_OF_VIEW = "OutOfView"


@dataclass(frozen=True)
class CameraModel:
    width: int = 640
    height: int = 480
    focal: float = 400.0
    safe_fraction: float = 0.6

    def __post_init__(self):
        if not 0.0 < self.safe_fraction < 1.0:
            raise ValueError("safe_fraction must lie in (0, 1)")
        if self.width <= 0 or self.height <= 0 or not self.focal > 0:
            raise ValueError("camera resolution and focal length must be positive")

    @property
    def center(self) -> Tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)


@dataclass(frozen=True)
class ImageObservation:
    tag_pixel: Optional[Tuple[float, float]]
    region: Region
    timestamp: float = 0.0

    @property
    def in_view(self) -> bool:
        return self.region is not Region.OUT_OF_VIEW


@dataclass(frozen=True)
class SonarConfig:
    cone_half_angle: float = math.pi / 4
    max_range: float = 3.0


@dataclass(frozen=True)
class SonarReading:
    range: Optional[float]
    max_range: float
    timestamp: float = 0.0


@dataclass(frozen=True)
class RelativeYawObservation:
    value: float
    timestamp: float = 0.0


def _truncated_noise(rng, sigma: float) -> float:
    # clipped at 3 sigma so a pixel well outside the frame can never flip into view
    return min(max(float(rng.normal(0.0, sigma)), -3.0 * sigma), 3.0 * sigma)


def classify_region(pixel: Tuple[float, float], cam: CameraModel) -> Region:
    u, v = pixel
    if not (0.0 <= u <= cam.width and 0.0 <= v <= cam.height):
        return Region.OUT_OF_VIEW
    wc, hc = cam.center
    if (abs(u - wc) <= 0.5 * cam.safe_fraction * cam.width
            and abs(v - hc) <= 0.5 * cam.safe_fraction * cam.height):
        return Region.SAFE
    return Region.INTEGRATION


def project(observer: RobotState, target: RobotState, cam: CameraModel,
            looking: str) -> Tuple[float, float]:
    """Pixel coordinates of ``target`` in the observer's vertical camera."""
    h = abs(observer.z - target.z)
    if h == 0.0:
        raise ValueError("zero vertical separation: optical axis is degenerate")
    dx = target.x - observer.x
    dy = target.y - observer.y
    c, s = math.cos(observer.yaw), math.sin(observer.yaw)
    bx = c * dx + s * dy
    by = -s * dx + c * dy
    wc, hc = cam.center
    k = cam.focal / h
    if looking == DOWN:
        u = wc - k * by
    elif looking == UP:
        # looking up mirrors left/right
        u = wc + k * by
    else:
        raise ValueError(f"looking must be 'up' or 'down', got {looking!r}")
    return (u, hc - k * bx)


def observe_tag(observer: RobotState, target: RobotState, cam: CameraModel, looking: str,
                timestamp: float = 0.0, rng=None, pixel_noise: float = 0.0) -> ImageObservation:
    u, v = project(observer, target, cam, looking)
    if pixel_noise > 0.0 and rng is not None:
        u += _truncated_noise(rng, pixel_noise)
        v += _truncated_noise(rng, pixel_noise)
    region = classify_region((u, v), cam)
    if region is Region.OUT_OF_VIEW:
        return ImageObservation(None, region, timestamp)
    return ImageObservation((u, v), region, timestamp)


def read_sonar(auv: RobotState, world: WorldModel, cone_half_angle: float, max_range: float,
               timestamp: float = 0.0, rng=None, range_noise: float = 0.0) -> SonarReading:
    d = distance_to_nearest_obstacle(auv.xy, auv.yaw, cone_half_angle, max_range, world)
    if d is not None and range_noise > 0.0 and rng is not None:
        d = max(d + _truncated_noise(rng, range_noise), 1e-6)
        if d > max_range:
            d = None
    return SonarReading(d, max_range, timestamp)


def read_wall_distance(asv: RobotState, world: WorldModel) -> float:
    return signed_wall_distance(asv.xy, asv.yaw, world)


def observe_relative_yaw(auv: RobotState, asv: RobotState,
                         timestamp: float = 0.0) -> RelativeYawObservation:
    return RelativeYawObservation(wrap_angle(asv.yaw - auv.yaw), timestamp)
