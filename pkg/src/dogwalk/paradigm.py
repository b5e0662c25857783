"""Implicit leader/follower signalling and command composition.

Level 1 (surface side): when the follower's tag has sat in the outer image band
for a whole window, the leader down-weights its own target seeking so the
follower can drag it around the obstacle.

Level 2 (surface side): when the leader is pushed close to a side wall while
the follower is still pulling, it yanks -- a fast yaw rotation whose sign is
the sign of the signed wall distance.

Level 2 (underwater side): the follower watches the leader's relative yaw
and, on a fast enough change, adopts the sign of that yaw as its avoidance
side.

All state objects are immutable; every update returns a new one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from .control import LEFT, RIGHT
from .dynamics import ControlInput, DynamicsParams, clamp, wrap_angle
from .perception import Region, RelativeYawObservation

_TIME_EPS = 1e-9


@dataclass(frozen=True)
class ParadigmConfig:
    k_v: float = 1.0
    beta: float = 0.2
    window_s: float = 4.0
    rate_hz: float = 1.0
    wall_safe_distance: float = 0.5
    yank_rate: float = 1.0
    yank_duration: float = 1.0
    yaw_threshold: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if not (self.k_v > 0 and self.window_s > 0 and self.rate_hz > 0):
            raise ValueError("k_v, window_s and rate_hz must be positive")
        if not (self.yank_rate > 0 and self.yank_duration > 0):
            raise ValueError("yank rate and duration must be positive")
        if not (self.yaw_threshold > 0 and self.wall_safe_distance > 0):
            raise ValueError("yaw threshold and wall safe distance must be positive")
        if abs(self.window_s * self.rate_hz - round(self.window_s * self.rate_hz)) > 1e-9:
            raise ValueError("window_s * rate_hz must be a whole number of samples")


@dataclass(frozen=True)
class WeightingState:
    """Leader weights K_P (target seeking) and K_V (formation)."""

    k_v: float = 1.0
    beta: float = 0.2
    window_s: float = 4.0
    rate_hz: float = 1.0
    history: Tuple[int, ...] = ()
    k_p: float = None

    def __post_init__(self):
        if self.k_p is None:
            object.__setattr__(self, "k_p", self.k_v)

    @classmethod
    def from_config(cls, cfg: ParadigmConfig) -> "WeightingState":
        return cls(k_v=cfg.k_v, beta=cfg.beta, window_s=cfg.window_s, rate_hz=cfg.rate_hz)

    @property
    def window_len(self) -> int:
        return int(round(self.window_s * self.rate_hz))

    @property
    def reduced(self) -> bool:
        return self.k_p != self.k_v


def occupancy(region: Region) -> int:
    """1 while the tag is outside the safe area (lost view counts as outside)."""
    return 0 if region is Region.SAFE else 1


def update_weighting(w: WeightingState, region: Region, now: float = 0.0) -> WeightingState:
    n = w.window_len
    history = (w.history + (occupancy(region),))[-n:]
    saturated = len(history) == n and all(history)
    return replace(w, history=history, k_p=w.beta * w.k_v if saturated else w.k_v)


@dataclass(frozen=True)
class Level2State:
    safe_distance: float = 0.5
    yank_rate: float = 1.0
    duration: float = 1.0
    mu: Optional[int] = None
    active_until: float = -math.inf

    @classmethod
    def from_config(cls, cfg: ParadigmConfig) -> "Level2State":
        return cls(safe_distance=cfg.wall_safe_distance, yank_rate=cfg.yank_rate,
                   duration=cfg.yank_duration)

    def active(self, now: float) -> bool:
        return now < self.active_until - _TIME_EPS


def level2_indicator(l2: Level2State, d_w: float, region: Region, now: float):
    """Returns ``(yaw_injection, new_state)``.

    A yank lasts ``duration`` seconds once started and cannot be interrupted;
    a new one may start as soon as the previous one ends if the trigger still
    holds.
    """
    if l2.active(now):
        return l2.mu * l2.yank_rate, l2
    if abs(d_w) <= l2.safe_distance and region is Region.INTEGRATION:
        if not (math.isfinite(d_w) and d_w != 0.0):
            raise ValueError(f"wall distance must be finite and non-zero, got {d_w}")
        mu = 1 if d_w > 0 else -1
        l2 = replace(l2, mu=mu, active_until=now + l2.duration)
        return mu * l2.yank_rate, l2
    return 0.0, l2


@dataclass(frozen=True)
class Level2Detector:
    threshold: float = 0.5
    lookback: float = 1.0
    history: Tuple[Tuple[float, float], ...] = field(default=(), repr=False)

    @classmethod
    def from_config(cls, cfg: ParadigmConfig) -> "Level2Detector":
        return cls(threshold=cfg.yaw_threshold, lookback=cfg.yank_duration)


def detect_level2(det: Level2Detector, obs: RelativeYawObservation):
    """Returns ``(lambda_update or None, new_detector)``."""
    now = obs.timestamp
    cutoff = now - det.lookback + _TIME_EPS
    history = det.history + ((now, obs.value),)
    # keep only the newest sample at or before the cutoff, plus everything after it
    first = 0
    for i, (t, _) in enumerate(history):
        if t <= cutoff:
            first = i
        else:
            break
    history = history[first:]
    det = replace(det, history=history)
    t_old, psi_old = history[0]
    if t_old > cutoff:
        return None, det
    delta = wrap_angle(obs.value - psi_old)
    if abs(delta) >= det.threshold and obs.value != 0.0:
        return (LEFT if obs.value > 0 else RIGHT), det
    return None, det


@dataclass(frozen=True)
class ParadigmState:
    weighting: WeightingState
    level2: Level2State
    detector: Level2Detector
    lam: int = LEFT

    def __post_init__(self):
        if self.lam not in (LEFT, RIGHT):
            raise ValueError("lambda must be +1 or -1")

    @classmethod
    def initial(cls, cfg: ParadigmConfig, lam: int = LEFT) -> "ParadigmState":
        return cls(WeightingState.from_config(cfg), Level2State.from_config(cfg),
                   Level2Detector.from_config(cfg), lam)


def compose_asv(planner: ControlInput, ibvs: ControlInput, yaw_injection: float,
                w: WeightingState, params: DynamicsParams = None) -> ControlInput:
    """``K_P * planner + K_V * ibvs`` with the yank added on yaw, then saturated."""
    cmd = planner.scaled(w.k_p) + ibvs.scaled(w.k_v) + ControlInput(yaw=yaw_injection)
    return clamp(cmd, params) if params is not None else cmd


def compose_auv(avoid: ControlInput, ibvs: ControlInput, depth_hold: ControlInput,
                params: DynamicsParams = None) -> ControlInput:
    cmd = avoid + ibvs + depth_hold
    return clamp(cmd, params) if params is not None else cmd
