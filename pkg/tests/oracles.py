"""Independent reference implementations used to check the package.

These avoid the package's closed-form geometry: ranges come from dense
boundary sampling, projections from a homogeneous camera matrix, and the
motion model from the closed-form decay of a discrete lag.
"""
import math

import numpy as np

from dogwalk.world import CircleObstacle


def boundary_points(obstacle, n=20000):
    if isinstance(obstacle, CircleObstacle):
        a = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        cx, cy = obstacle.center
        return np.column_stack([cx + obstacle.radius * np.cos(a), cy + obstacle.radius * np.sin(a)])
    (x0, y0), (x1, y1) = obstacle.lo, obstacle.hi
    s = np.linspace(0.0, 1.0, n // 4, endpoint=False)
    edges = [
        np.column_stack([x0 + s * (x1 - x0), np.full_like(s, y0)]),
        np.column_stack([np.full_like(s, x1), y0 + s * (y1 - y0)]),
        np.column_stack([x1 - s * (x1 - x0), np.full_like(s, y1)]),
        np.column_stack([np.full_like(s, x0), y1 - s * (y1 - y0)]),
    ]
    return np.vstack(edges)


def cone_range(p, heading, half_angle, max_range, obstacles, n=20000):
    """Nearest sampled boundary point inside the cone and range, or None."""
    best = math.inf
    h = np.array([math.cos(heading), math.sin(heading)])
    for ob in obstacles:
        pts = boundary_points(ob, n) - np.asarray(p)
        d = np.hypot(pts[:, 0], pts[:, 1])
        cosang = (pts @ h) / np.maximum(d, 1e-300)
        ok = (cosang >= math.cos(half_angle) - 1e-12) & (d <= max_range)
        if ok.any():
            best = min(best, float(d[ok].min()))
    return None if math.isinf(best) else best


def signed_clearance(p, obstacles, n=20000):
    """Distance to the nearest boundary sample, negative when p is inside an obstacle."""
    best = math.inf
    for ob in obstacles:
        d = float(np.hypot(*(boundary_points(ob, n) - np.asarray(p)).T).min())
        if isinstance(ob, CircleObstacle):
            inside = math.dist(p, ob.center) < ob.radius
        else:
            inside = ob.lo[0] < p[0] < ob.hi[0] and ob.lo[1] < p[1] < ob.hi[1]
        best = min(best, -d if inside else d)
    return best


def pinhole(observer_xyz, observer_yaw, target_xyz, cam, looking):
    """Project through K [R | t] with an explicit camera rotation."""
    c, s = math.cos(observer_yaw), math.sin(observer_yaw)
    world_to_body = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    if looking == "down":
        # camera x = body -y, camera y = body -x, optical axis = world -z
        body_to_cam = np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
    else:
        body_to_cam = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    K = np.array([[cam.focal, 0.0, cam.width / 2], [0.0, cam.focal, cam.height / 2], [0, 0, 1.0]])
    rel = np.asarray(target_xyz, float) - np.asarray(observer_xyz, float)
    pc = body_to_cam @ world_to_body @ rel
    uvw = K @ pc
    return float(uvw[0] / uvw[2]), float(uvw[1] / uvw[2])


def lag_velocity(v0, u, tau, dt, n):
    """Velocity after n discrete lag steps toward a constant command."""
    return u + (v0 - u) * (1.0 - dt / tau) ** n


def weight_reduced(window):
    """Reduction happens only when every sample of a full window is outside the safe area."""
    return len(window) == 4 and sum(window) == 4
