"""Static tank environment and the geometric queries the sensors rely on.

Coordinates: tank corner at the origin, +x along the tank length, +y across
it, +z up with the water surface at z = 0. Obstacles are 2-D footprints that
fill the water column below the surface, so the surface vehicle passes over
them while the underwater vehicle cannot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from . import kernels

Point = Tuple[float, float]

_SIDE_EPS = 1e-9
_TIE_EPS = 1e-9


@dataclass(frozen=True)
class Tank:
    length_x: float
    width_y: float
    depth_z: float

    def __post_init__(self):
        if not (self.length_x > 0 and self.width_y > 0 and self.depth_z > 0):
            raise ValueError(f"tank dimensions must be positive: {self}")

    def contains(self, p: Point) -> bool:
        return 0.0 <= p[0] <= self.length_x and 0.0 <= p[1] <= self.width_y


@dataclass(frozen=True)
class CircleObstacle:
    center: Point
    radius: float
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.radius > 0:
            raise ValueError(f"obstacle {self.label!r}: radius must be > 0")

    def bounds(self) -> Tuple[float, float, float, float]:
        cx, cy = self.center
        return (cx - self.radius, cy - self.radius, cx + self.radius, cy + self.radius)


@dataclass(frozen=True)
class BoxObstacle:
    """Axis-aligned rectangular footprint."""

    lo: Point
    hi: Point
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lo", (float(self.lo[0]), float(self.lo[1])))
        object.__setattr__(self, "hi", (float(self.hi[0]), float(self.hi[1])))
        if not (self.lo[0] < self.hi[0] and self.lo[1] < self.hi[1]):
            raise ValueError(f"obstacle {self.label!r}: min must be < max componentwise")

    @property
    def center(self) -> Point:
        return (0.5 * (self.lo[0] + self.hi[0]), 0.5 * (self.lo[1] + self.hi[1]))

    def bounds(self) -> Tuple[float, float, float, float]:
        return (self.lo[0], self.lo[1], self.hi[0], self.hi[1])


Obstacle = Union[CircleObstacle, BoxObstacle]


@dataclass(frozen=True)
class WorldModel:
    tank: Tank
    obstacles: Tuple[Obstacle, ...]
    asv_start: Point
    asv_target: Point
    auv_start: Point
    auv_hold_depth: float = -1.5
    _packed: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for name in ("asv_start", "asv_target", "auv_start"):
            p = getattr(self, name)
            p = (float(p[0]), float(p[1]))
            object.__setattr__(self, name, p)
            if not self.tank.contains(p):
                raise ValueError(f"{name} {p} lies outside the tank")
        if not -self.tank.depth_z < self.auv_hold_depth < 0.0:
            raise ValueError(f"auv_hold_depth {self.auv_hold_depth} not within (-depth, 0)")
        for ob in self.obstacles:
            x0, y0, x1, y1 = ob.bounds()
            if x0 < 0 or y0 < 0 or x1 > self.tank.length_x or y1 > self.tank.width_y:
                raise ValueError(f"obstacle {ob.label!r} extends outside the tank footprint")

    def packed(self):
        """Obstacle geometry in the layout expected by the active kernel backend."""
        backend = kernels.get_backend()
        cached = self._packed.get(backend)
        if cached is None:
            circles = [(o.center[0], o.center[1], o.radius)
                       for o in self.obstacles if isinstance(o, CircleObstacle)]
            boxes = [o.bounds() for o in self.obstacles if isinstance(o, BoxObstacle)]
            cached = kernels.pack_obstacles(circles, boxes)
            self._packed[backend] = cached
        return cached


def distance_to_nearest_obstacle(p: Point, heading: float, cone_half_angle: float,
                                 max_range: float, world: WorldModel) -> Optional[float]:
    """Range to the closest obstacle boundary point inside a forward cone.

    Returns None when no boundary point lies within both the cone and
    ``max_range``.
    """
    if not 0.0 < cone_half_angle <= math.pi / 2:
        raise ValueError("cone_half_angle must lie in (0, pi/2]")
    if not max_range > 0.0:
        raise ValueError("max_range must be positive")
    d = kernels.cone_range(float(p[0]), float(p[1]), float(heading), float(cone_half_angle),
                           float(max_range), world.packed())
    return None if math.isinf(d) else d


def _wall_distances(p: Point, heading: float, tank: Tank):
    left = right = math.inf
    lx, ly = -math.sin(heading), math.cos(heading)
    # (perpendicular distance, direction from p toward the wall)
    for dist, ux, uy in ((p[0], -1.0, 0.0), (tank.length_x - p[0], 1.0, 0.0),
                         (p[1], 0.0, -1.0), (tank.width_y - p[1], 0.0, 1.0)):
        side = lx * ux + ly * uy
        if side > _SIDE_EPS:
            left = min(left, dist)
        elif side < -_SIDE_EPS:
            right = min(right, dist)
    return left, right


def signed_wall_distance(p: Point, heading: float, world: WorldModel) -> float:
    """Distance to the nearest side wall; negative when that wall is on the left.

    Walls dead ahead or astern are ignored. Equal left/right distances resolve
    to the right wall (positive).
    """
    left, right = _wall_distances(p, heading, world.tank)
    if left < right and abs(left - right) >= _TIE_EPS:
        return -left
    return right


def wall_clearance(p: Point, world: WorldModel) -> float:
    t = world.tank
    return min(p[0], t.length_x - p[0], p[1], t.width_y - p[1])


def obstacle_clearance(p: Point, world: WorldModel) -> float:
    """Signed distance from p to the nearest obstacle (negative inside, inf if none)."""
    return kernels.clearance(float(p[0]), float(p[1]), world.packed())


def collides(p: Point, footprint_radius: float, world: WorldModel,
             obstacles: bool = True) -> bool:
    """True if a disc at p touches the interior of an obstacle or crosses a wall.

    Contact at exactly ``footprint_radius`` is not a collision. Pass
    ``obstacles=False`` to check the tank walls only (surface vehicle).
    """
    if not footprint_radius > 0:
        raise ValueError("footprint_radius must be positive")
    if wall_clearance(p, world) < footprint_radius:
        return True
    return obstacles and obstacle_clearance(p, world) < footprint_radius
