"""Robot state, body-frame commands and the first-order-lag motion model.

Both vehicles are treated as omnidirectional. Each controllable body axis
follows a first-order velocity lag toward its command; the pose is then
advanced with semi-implicit Euler (velocity first, then position).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from . import kernels

AXES = ("x", "y", "z", "roll", "pitch", "yaw")

ASV = "asv"
AUV = "auv"

# 1 = integrated, 0 = pinned at zero velocity
ACTIVE_AXES = {
    ASV: (1, 1, 0, 0, 0, 1),
    # roll and pitch are passively held level on the underwater vehicle
    AUV: (1, 1, 1, 0, 0, 1),
}

Vec6 = Tuple[float, float, float, float, float, float]
ZERO6: Vec6 = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    return kernels.wrap_angle(float(a))


@dataclass(frozen=True)
class ControlInput:
    """Body-frame velocity command; unused axes stay zero."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    @classmethod
    def from_tuple(cls, v) -> "ControlInput":
        return cls(*(float(c) for c in v))

    def as_tuple(self) -> Vec6:
        return (self.x, self.y, self.z, self.roll, self.pitch, self.yaw)

    def __add__(self, other: "ControlInput") -> "ControlInput":
        return ControlInput(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __neg__(self) -> "ControlInput":
        return ControlInput(*(-a for a in self.as_tuple()))

    def scaled(self, k: float) -> "ControlInput":
        return ControlInput(*(k * a for a in self.as_tuple()))

    def planar(self) -> "ControlInput":
        return ControlInput(x=self.x, y=self.y)

    def planar_norm(self) -> float:
        return math.hypot(self.x, self.y)

    def is_zero(self) -> bool:
        return not any(self.as_tuple())


ZERO_CMD = ControlInput()


@dataclass(frozen=True)
class RobotState:
    kind: str
    x: float
    y: float
    z: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    velocity: Vec6 = ZERO6

    def __post_init__(self):
        if self.kind not in ACTIVE_AXES:
            raise ValueError(f"unknown robot kind {self.kind!r}")
        object.__setattr__(self, "velocity", tuple(float(v) for v in self.velocity))
        if len(self.velocity) != 6:
            raise ValueError("velocity must have 6 components")

    @property
    def position(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @property
    def xy(self) -> Tuple[float, float]:
        return (self.x, self.y)

    @property
    def orientation(self) -> Tuple[float, float, float]:
        return (self.roll, self.pitch, self.yaw)


@dataclass(frozen=True)
class DynamicsParams:
    """Per-axis lag time constants and saturations, ordered as ``AXES``."""

    tau: Vec6 = (0.5,) * 6
    saturation: Vec6 = (0.3, 0.3, 0.3, 0.5, 0.5, 1.5)
    dt: float = 0.02

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(float(v) for v in self.tau))
        object.__setattr__(self, "saturation", tuple(float(v) for v in self.saturation))
        if len(self.tau) != 6 or len(self.saturation) != 6:
            raise ValueError("tau and saturation need one entry per axis (6)")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        for name, tau in zip(AXES, self.tau):
            if not tau > 0:
                raise ValueError(f"tau[{name}] must be positive")
            if self.dt > tau / 2:
                raise ValueError(f"dt={self.dt} exceeds tau[{name}]/2={tau / 2}")
        if any(s < 0 for s in self.saturation):
            raise ValueError("saturation bounds must be non-negative")


def clamp(cmd: ControlInput, params: DynamicsParams) -> ControlInput:
    return ControlInput(*(min(max(c, -s), s)
                          for c, s in zip(cmd.as_tuple(), params.saturation)))


def step(state: RobotState, cmd: ControlInput, params: DynamicsParams) -> RobotState:
    """Advance one robot by ``params.dt`` under a body-frame command."""
    c = cmd.as_tuple()
    if not all(math.isfinite(v) for v in c):
        raise ValueError(f"non-finite command {cmd}")
    if not all(math.isfinite(v) for v in (state.x, state.y, state.z, state.yaw) + state.velocity):
        raise ValueError("non-finite robot state")
    x, y, z, yaw, vel = kernels.integrate(state.x, state.y, state.z, state.yaw, state.velocity,
                                          c, params.tau, ACTIVE_AXES[state.kind], params.dt)
    if state.kind == ASV:
        z = 0.0
    return RobotState(state.kind, x, y, z, 0.0, 0.0, yaw, vel)
