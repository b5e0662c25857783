"""Backend selection for the numeric kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used. Set ``DOGWALK_PURE_PYTHON=1`` to
force the fallback.
"""
import os

from . import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from . import _kernels as _cy
except ImportError:  # extension not built
    _cy = None
else:
    _BACKENDS["cython"] = _cy

_impl = _pykernels if (_cy is None or os.environ.get("DOGWALK_PURE_PYTHON") == "1") else _cy


def available_backends():
    return sorted(_BACKENDS)


def get_backend():
    return _impl.NAME


def set_backend(name):
    """Switch the active backend; returns the previous backend name."""
    global _impl
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    prev = _impl.NAME
    _impl = _BACKENDS[name]
    return prev


def wrap_angle(a):
    return _impl.wrap_angle(a)


def pack_obstacles(circles, boxes):
    return _impl.pack_obstacles(circles, boxes)


def cone_range(px, py, heading, half_angle, max_range, packed):
    return _impl.cone_range(px, py, heading, half_angle, max_range, packed)


def clearance(px, py, packed):
    return _impl.clearance(px, py, packed)


def integrate(x, y, z, yaw, vel, cmd, tau, active, dt):
    return _impl.integrate(x, y, z, yaw, vel, cmd, tau, active, dt)
