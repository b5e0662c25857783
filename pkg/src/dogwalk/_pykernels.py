"""Pure-Python implementations of the per-step numeric kernels.

These mirror ``_kernels.pyx`` operation-for-operation so that both backends
produce bit-identical floats on IEEE-754 hardware.
"""
import math

NAME = "python"

TWO_PI = 2.0 * math.pi
INF = math.inf


def wrap_angle(a):
    """Normalize an angle to (-pi, pi]."""
    a = math.remainder(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    return a


def pack_obstacles(circles, boxes):
    return (tuple(tuple(float(v) for v in c) for c in circles),
            tuple(tuple(float(v) for v in b) for b in boxes))


def _ray_circle(px, py, ex, ey, cx, cy, r):
    # smallest t >= 0 with |p + t e - c| = r
    wx = px - cx
    wy = py - cy
    b = ex * wx + ey * wy
    c = wx * wx + wy * wy - r * r
    disc = b * b - c
    if disc < 0.0:
        return INF
    sq = math.sqrt(disc)
    t1 = -b - sq
    if t1 >= 0.0:
        return t1
    t2 = -b + sq
    if t2 >= 0.0:
        return t2
    return INF


def _cone_circle(px, py, hx, hy, cos_half, e1x, e1y, e2x, e2y, cx, cy, r):
    best = INF
    dx = cx - px
    dy = cy - py
    dc = math.sqrt(dx * dx + dy * dy)
    if dc > r:
        if hx * dx + hy * dy >= dc * cos_half - 1e-12:
            best = dc - r
    elif dc > 0.0:
        # inside the disc: nearest boundary point lies away from the center
        if -(hx * dx + hy * dy) >= dc * cos_half - 1e-12:
            best = r - dc
    else:
        best = r
    t = _ray_circle(px, py, e1x, e1y, cx, cy, r)
    if t < best:
        best = t
    t = _ray_circle(px, py, e2x, e2y, cx, cy, r)
    if t < best:
        best = t
    return best


def _cone_segment(px, py, e1x, e1y, e2x, e2y, ax, ay, bx, by):
    # clip segment a->b to {cross(e1, q-p) <= 0} and {cross(e2, q-p) >= 0}
    s0 = 0.0
    s1 = 1.0
    wx = ax - px
    wy = ay - py
    sx = bx - ax
    sy = by - ay
    # constraint 1: f(s) = cross(e1, w + s*d) <= 0
    f0 = e1x * wy - e1y * wx
    fd = e1x * sy - e1y * sx
    if fd == 0.0:
        if f0 > 1e-12:
            return INF
    else:
        s = -f0 / fd
        if fd > 0.0:
            if s < s1:
                s1 = s
        else:
            if s > s0:
                s0 = s
    # constraint 2: g(s) = cross(e2, w + s*d) >= 0
    g0 = e2x * wy - e2y * wx
    gd = e2x * sy - e2y * sx
    if gd == 0.0:
        if g0 < -1e-12:
            return INF
    else:
        s = -g0 / gd
        if gd < 0.0:
            if s < s1:
                s1 = s
        else:
            if s > s0:
                s0 = s
    if s0 > s1:
        return INF
    dd = sx * sx + sy * sy
    s = -(wx * sx + wy * sy) / dd
    if s < s0:
        s = s0
    elif s > s1:
        s = s1
    qx = wx + s * sx
    qy = wy + s * sy
    return math.sqrt(qx * qx + qy * qy)


def cone_range(px, py, heading, half_angle, max_range, packed):
    """Nearest obstacle boundary point inside the forward cone, or inf."""
    circles, boxes = packed
    hx = math.cos(heading)
    hy = math.sin(heading)
    e1x = math.cos(heading + half_angle)
    e1y = math.sin(heading + half_angle)
    e2x = math.cos(heading - half_angle)
    e2y = math.sin(heading - half_angle)
    cos_half = math.cos(half_angle)
    best = INF
    for cx, cy, r in circles:
        d = _cone_circle(px, py, hx, hy, cos_half, e1x, e1y, e2x, e2y, cx, cy, r)
        if d < best:
            best = d
    for x0, y0, x1, y1 in boxes:
        for ax, ay, bx, by in ((x0, y0, x1, y0), (x1, y0, x1, y1),
                               (x1, y1, x0, y1), (x0, y1, x0, y0)):
            d = _cone_segment(px, py, e1x, e1y, e2x, e2y, ax, ay, bx, by)
            if d < best:
                best = d
    if best > max_range:
        return INF
    return best


def clearance(px, py, packed):
    """Minimum signed distance from a point to any obstacle (inf if none)."""
    circles, boxes = packed
    best = INF
    for cx, cy, r in circles:
        dx = px - cx
        dy = py - cy
        d = math.sqrt(dx * dx + dy * dy) - r
        if d < best:
            best = d
    for x0, y0, x1, y1 in boxes:
        ox = max(x0 - px, 0.0, px - x1)
        oy = max(y0 - py, 0.0, py - y1)
        if ox > 0.0 or oy > 0.0:
            d = math.sqrt(ox * ox + oy * oy)
        else:
            d = -min(px - x0, x1 - px, py - y0, y1 - py)
        if d < best:
            best = d
    return best


def integrate(x, y, z, yaw, vel, cmd, tau, active, dt):
    """Relax body velocities toward ``cmd`` then advance the pose by one step.

    ``vel``, ``cmd``, ``tau`` and ``active`` are 6-sequences over the axes
    (x, y, z, roll, pitch, yaw). Inactive axes are pinned to zero velocity.
    """
    v = [0.0] * 6
    for i in range(6):
        if active[i]:
            v[i] = vel[i] + (dt / tau[i]) * (cmd[i] - vel[i])
    c = math.cos(yaw)
    s = math.sin(yaw)
    x = x + (c * v[0] - s * v[1]) * dt
    y = y + (s * v[0] + c * v[1]) * dt
    z = z + v[2] * dt
    yaw = wrap_angle(yaw + v[5] * dt)
    return x, y, z, yaw, tuple(v)
