# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-step kernels. Must stay numerically identical to _pykernels."""
import numpy as np

from libc.math cimport sqrt, cos, sin, remainder, M_PI, INFINITY

NAME = "cython"

cdef double TWO_PI = 2.0 * M_PI


cpdef double wrap_angle(double a):
    a = remainder(a, TWO_PI)
    if a <= -M_PI:
        a += TWO_PI
    return a


def pack_obstacles(circles, boxes):
    c = np.asarray([tuple(map(float, o)) for o in circles], dtype=np.float64).reshape(-1, 3)
    b = np.asarray([tuple(map(float, o)) for o in boxes], dtype=np.float64).reshape(-1, 4)
    return (np.ascontiguousarray(c), np.ascontiguousarray(b))


cdef inline double _ray_circle(double px, double py, double ex, double ey,
                               double cx, double cy, double r) nogil:
    cdef double wx = px - cx
    cdef double wy = py - cy
    cdef double b = ex * wx + ey * wy
    cdef double c = wx * wx + wy * wy - r * r
    cdef double disc = b * b - c
    cdef double sq, t1, t2
    if disc < 0.0:
        return INFINITY
    sq = sqrt(disc)
    t1 = -b - sq
    if t1 >= 0.0:
        return t1
    t2 = -b + sq
    if t2 >= 0.0:
        return t2
    return INFINITY


cdef inline double _cone_circle(double px, double py, double hx, double hy,
                                double cos_half, double e1x, double e1y,
                                double e2x, double e2y,
                                double cx, double cy, double r) nogil:
    cdef double best = INFINITY
    cdef double dx = cx - px
    cdef double dy = cy - py
    cdef double dc = sqrt(dx * dx + dy * dy)
    cdef double t
    if dc > r:
        if hx * dx + hy * dy >= dc * cos_half - 1e-12:
            best = dc - r
    elif dc > 0.0:
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


cdef inline double _cone_segment(double px, double py, double e1x, double e1y,
                                 double e2x, double e2y, double ax, double ay,
                                 double bx, double by) nogil:
    cdef double s0 = 0.0
    cdef double s1 = 1.0
    cdef double wx = ax - px
    cdef double wy = ay - py
    cdef double sx = bx - ax
    cdef double sy = by - ay
    cdef double f0, fd, g0, gd, s, dd, qx, qy
    f0 = e1x * wy - e1y * wx
    fd = e1x * sy - e1y * sx
    if fd == 0.0:
        if f0 > 1e-12:
            return INFINITY
    else:
        s = -f0 / fd
        if fd > 0.0:
            if s < s1:
                s1 = s
        else:
            if s > s0:
                s0 = s
    g0 = e2x * wy - e2y * wx
    gd = e2x * sy - e2y * sx
    if gd == 0.0:
        if g0 < -1e-12:
            return INFINITY
    else:
        s = -g0 / gd
        if gd < 0.0:
            if s < s1:
                s1 = s
        else:
            if s > s0:
                s0 = s
    if s0 > s1:
        return INFINITY
    dd = sx * sx + sy * sy
    s = -(wx * sx + wy * sy) / dd
    if s < s0:
        s = s0
    elif s > s1:
        s = s1
    qx = wx + s * sx
    qy = wy + s * sy
    return sqrt(qx * qx + qy * qy)


def cone_range(double px, double py, double heading, double half_angle,
               double max_range, packed):
    cdef const double[:, ::1] circles = packed[0]
    cdef const double[:, ::1] boxes = packed[1]
    cdef double hx = cos(heading)
    cdef double hy = sin(heading)
    cdef double e1x = cos(heading + half_angle)
    cdef double e1y = sin(heading + half_angle)
    cdef double e2x = cos(heading - half_angle)
    cdef double e2y = sin(heading - half_angle)
    cdef double cos_half = cos(half_angle)
    cdef double best = INFINITY
    cdef double d, x0, y0, x1, y1
    cdef Py_ssize_t i
    with nogil:
        for i in range(circles.shape[0]):
            d = _cone_circle(px, py, hx, hy, cos_half, e1x, e1y, e2x, e2y,
                             circles[i, 0], circles[i, 1], circles[i, 2])
            if d < best:
                best = d
        for i in range(boxes.shape[0]):
            x0 = boxes[i, 0]
            y0 = boxes[i, 1]
            x1 = boxes[i, 2]
            y1 = boxes[i, 3]
            d = _cone_segment(px, py, e1x, e1y, e2x, e2y, x0, y0, x1, y0)
            if d < best:
                best = d
            d = _cone_segment(px, py, e1x, e1y, e2x, e2y, x1, y0, x1, y1)
            if d < best:
                best = d
            d = _cone_segment(px, py, e1x, e1y, e2x, e2y, x1, y1, x0, y1)
            if d < best:
                best = d
            d = _cone_segment(px, py, e1x, e1y, e2x, e2y, x0, y1, x0, y0)
            if d < best:
                best = d
    if best > max_range:
        return INFINITY
    return best


def clearance(double px, double py, packed):
    cdef const double[:, ::1] circles = packed[0]
    cdef const double[:, ::1] boxes = packed[1]
    cdef double best = INFINITY
    cdef double d, dx, dy, ox, oy, x0, y0, x1, y1, m
    cdef Py_ssize_t i
    for i in range(circles.shape[0]):
        dx = px - circles[i, 0]
        dy = py - circles[i, 1]
        d = sqrt(dx * dx + dy * dy) - circles[i, 2]
        if d < best:
            best = d
    for i in range(boxes.shape[0]):
        x0 = boxes[i, 0]
        y0 = boxes[i, 1]
        x1 = boxes[i, 2]
        y1 = boxes[i, 3]
        ox = x0 - px
        if ox < 0.0:
            ox = 0.0
        if px - x1 > ox:
            ox = px - x1
        oy = y0 - py
        if oy < 0.0:
            oy = 0.0
        if py - y1 > oy:
            oy = py - y1
        if ox > 0.0 or oy > 0.0:
            d = sqrt(ox * ox + oy * oy)
        else:
            m = px - x0
            if x1 - px < m:
                m = x1 - px
            if py - y0 < m:
                m = py - y0
            if y1 - py < m:
                m = y1 - py
            d = -m
        if d < best:
            best = d
    return best


def integrate(double x, double y, double z, double yaw, vel, cmd, tau, active,
              double dt):
    cdef double v[6]
    cdef double c, s
    cdef int i
    for i in range(6):
        if active[i]:
            v[i] = <double>vel[i] + (dt / <double>tau[i]) * (<double>cmd[i] - <double>vel[i])
        else:
            v[i] = 0.0
    c = cos(yaw)
    s = sin(yaw)
    x = x + (c * v[0] - s * v[1]) * dt
    y = y + (s * v[0] + c * v[1]) * dt
    z = z + v[2] * dt
    yaw = wrap_angle(yaw + v[5] * dt)
    return x, y, z, yaw, (v[0], v[1], v[2], v[3], v[4], v[5])
