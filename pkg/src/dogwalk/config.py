"""YAML scenario files: parsing, overrides, sweeps and dumping.

File keys carry their units as suffixes (``_m``, ``_s``, ``_rad``, ...). A file
holds a suite:

    schema_version: 1
    defaults:            # partial sections applied to every scenario
      sim: {seed: 3}
    scenarios:
      - builtin: case2   # start from a built-in, then override
        mode: Baseline
      - name: custom     # or spell everything out
        mode: DogWalking
        expected: TargetReached
        world: {...}
        planner: {...}
    sweep:               # dotted file key -> values, Cartesian product
      paradigm.beta: [0.1, 0.2, 0.5]

Every unknown key is rejected with the line it appears on.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from .control import PlannerConfig
from .engine import Configs, Mode, Status
from .scenarios import BUILTIN_NAMES, ScenarioDef, builtin
from .world import BoxObstacle, CircleObstacle, Tank, WorldModel

SCHEMA_VERSION = 1

# field name -> unit suffix used in files; fields not listed are unitless or
# already carry their unit in the name
UNITS = {
    "waypoints": "m", "capture_radius": "m", "max_speed": "mps", "heading": "rad",
    "heading_rate_max": "radps", "kp": "per_s", "heading_gain": "per_s",
    "dt": "s", "asv_radius": "m", "auv_radius": "m",
    "tau": "s", "width": "px", "height": "px", "focal": "px",
    "cone_half_angle": "rad", "max_range": "m",
    "xi_max_x": "mps", "xi_max_y": "mps",
    "alpha": "m2ps", "safe_distance": "m",
    "target_depth": "m", "target_roll": "rad", "target_pitch": "rad",
    "wall_safe_distance": "m", "yank_rate": "radps", "yank_duration": "s",
    "yaw_threshold": "rad", "window_s": "", "rate_hz": "",
    "length_x": "m", "width_y": "m", "depth_z": "m",
    "asv_start": "m", "asv_target": "m", "auv_start": "m", "auv_hold_depth": "m",
    "center": "m", "radius": "m", "lo": "m", "hi": "m",
}

SECTIONS = tuple(f.name for f in dataclasses.fields(Configs))
_SCENARIO_META = ("name", "builtin", "mode", "expected", "world")


class ConfigError(ValueError):
    """Malformed or inconsistent configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def file_key(name: str) -> str:
    unit = UNITS.get(name, "")
    return f"{name}_{unit}" if unit else name


_FIELD_FOR_KEY = {file_key(n): n for n in UNITS}


def field_name(key: str) -> str:
    return _FIELD_FOR_KEY.get(key, key)


# ---------------------------------------------------------------- YAML with lines

class _Map(dict):
    """Mapping that remembers the line of each key."""

    line: Optional[int] = None
    key_lines: Dict[str, int]


class _Seq(list):
    line: Optional[int] = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    loader.flatten_mapping(node)
    out = _Map()
    out.line = node.start_mark.line + 1
    out.key_lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", key_node.start_mark.line + 1)
        out[key] = loader.construct_object(value_node, deep=True)
        out.key_lines[key] = key_node.start_mark.line + 1
    return out


def _construct_seq(loader, node):
    out = _Seq(loader.construct_object(child, deep=True) for child in node.value)
    out.line = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)


def _line(obj, key=None) -> Optional[int]:
    if key is not None and isinstance(obj, _Map):
        return obj.key_lines.get(key, obj.line)
    return getattr(obj, "line", None)


def load_text(text: str):
    try:
        return yaml.load(text, Loader=_Loader)
    except ConfigError:
        raise
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None


# ---------------------------------------------------------------- dataclass <-> dict

def _plain(value):
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def to_dict(obj) -> Dict[str, Any]:
    out = {}
    for f in dataclasses.fields(obj):
        if not f.init:
            continue
        value = getattr(obj, f.name)
        out[file_key(f.name)] = to_dict(value) if dataclasses.is_dataclass(value) else _plain(value)
    return out


def _coerce(value, like, where: str, line):
    """Convert a YAML value to the type of the current field value ``like``."""
    if isinstance(like, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false", line)
        return value
    if isinstance(like, int) and not isinstance(like, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer", line)
        return value
    if isinstance(like, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number", line)
        return float(value)
    if isinstance(like, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string", line)
        return value
    if isinstance(like, tuple):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list", line)
        if like and isinstance(like[0], tuple):
            return tuple(_coerce(v, like[0], where, _line(v) or line) for v in value)
        if like and len(value) != len(like):
            raise ConfigError(f"{where}: expected {len(like)} values", line)
        return tuple(_coerce(v, like[0] if like else 0.0, where, line) for v in value)
    raise ConfigError(f"{where}: unsupported value", line)


def merge(obj, data, where: str):
    """Return ``obj`` with the fields named in the mapping ``data`` replaced."""
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping", _line(data))
    names = {f.name for f in dataclasses.fields(obj) if f.init}
    changes = {}
    for key, value in data.items():
        name = field_name(key)
        line = _line(data, key)
        if name not in names or file_key(name) != key:
            raise ConfigError(f"unknown key {where}.{key}", line)
        current = getattr(obj, name)
        if dataclasses.is_dataclass(current):
            changes[name] = merge(current, value, f"{where}.{key}")
        else:
            changes[name] = _coerce(value, current, f"{where}.{key}", line)
    try:
        return replace(obj, **changes)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}", _line(data)) from None


# ---------------------------------------------------------------- worlds

def world_to_dict(world: WorldModel) -> Dict[str, Any]:
    obstacles = []
    for o in world.obstacles:
        if isinstance(o, CircleObstacle):
            obstacles.append({"kind": "circle", "label": o.label,
                              "center_m": list(o.center), "radius_m": o.radius})
        else:
            obstacles.append({"kind": "box", "label": o.label,
                              "lo_m": list(o.lo), "hi_m": list(o.hi)})
    return {
        "tank": to_dict(world.tank),
        "obstacles": obstacles,
        "asv_start_m": list(world.asv_start),
        "asv_target_m": list(world.asv_target),
        "auv_start_m": list(world.auv_start),
        "auv_hold_depth_m": world.auv_hold_depth,
    }


_OBSTACLE_KEYS = {"circle": ("label", "center_m", "radius_m"), "box": ("label", "lo_m", "hi_m")}


def _point(value, where, line) -> Tuple[float, float]:
    return _coerce(value, (0.0, 0.0), where, line)


def _obstacle(data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping", _line(data))
    kind = data.get("kind")
    if kind not in _OBSTACLE_KEYS:
        raise ConfigError(f"{where}.kind must be 'circle' or 'box'", _line(data, "kind"))
    allowed = ("kind",) + _OBSTACLE_KEYS[kind]
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown key {where}.{key}", _line(data, key))
    for key in allowed[2:]:
        if key not in data:
            raise ConfigError(f"{where}: missing {key}", _line(data))
    label = str(data.get("label", ""))
    try:
        if kind == "circle":
            radius = _coerce(data["radius_m"], 0.0, f"{where}.radius_m", _line(data, "radius_m"))
            return CircleObstacle(_point(data["center_m"], f"{where}.center_m",
                                         _line(data, "center_m")), radius, label)
        return BoxObstacle(_point(data["lo_m"], f"{where}.lo_m", _line(data, "lo_m")),
                           _point(data["hi_m"], f"{where}.hi_m", _line(data, "hi_m")), label)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}", _line(data)) from None


def merge_world(world: Optional[WorldModel], data, where: str = "world") -> WorldModel:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping", _line(data))
    allowed = ("tank", "obstacles", "asv_start_m", "asv_target_m", "auv_start_m",
               "auv_hold_depth_m")
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown key {where}.{key}", _line(data, key))
    if world is None:
        for key in ("tank", "asv_start_m", "asv_target_m"):
            if key not in data:
                raise ConfigError(f"{where}: missing {key}", _line(data))
        tank_data = data["tank"]
        for key in ("length_x_m", "width_y_m", "depth_z_m"):
            if not isinstance(tank_data, dict) or key not in tank_data:
                raise ConfigError(f"{where}.tank: missing {key}", _line(tank_data))
        tank = merge(Tank(1.0, 1.0, 1.0), tank_data, f"{where}.tank")
        start = _point(data["asv_start_m"], f"{where}.asv_start_m", _line(data, "asv_start_m"))
        world_kw = dict(tank=tank, obstacles=(), asv_start=start,
                        asv_target=start, auv_start=start, auv_hold_depth=-1.5)
    else:
        world_kw = dict(tank=world.tank, obstacles=world.obstacles, asv_start=world.asv_start,
                        asv_target=world.asv_target, auv_start=world.auv_start,
                        auv_hold_depth=world.auv_hold_depth)
        if "tank" in data:
            world_kw["tank"] = merge(world.tank, data["tank"], f"{where}.tank")
    if "obstacles" in data:
        items = data["obstacles"]
        if not isinstance(items, list):
            raise ConfigError(f"{where}.obstacles: expected a list", _line(data, "obstacles"))
        world_kw["obstacles"] = tuple(_obstacle(o, f"{where}.obstacles[{i}]")
                                      for i, o in enumerate(items))
    for key in ("asv_start_m", "asv_target_m", "auv_start_m"):
        if key in data:
            world_kw[field_name(key)] = _point(data[key], f"{where}.{key}", _line(data, key))
    if world is None and "auv_start_m" not in data:
        world_kw["auv_start"] = world_kw["asv_start"]
    if "auv_hold_depth_m" in data:
        world_kw["auv_hold_depth"] = _coerce(data["auv_hold_depth_m"], 0.0,
                                             f"{where}.auv_hold_depth_m",
                                             _line(data, "auv_hold_depth_m"))
    try:
        return WorldModel(**world_kw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}", _line(data)) from None


# ---------------------------------------------------------------- scenarios

def scenario_to_dict(sc: ScenarioDef) -> Dict[str, Any]:
    out: Dict[str, Any] = {"name": sc.name, "mode": sc.mode.value}
    if sc.expected is not None:
        out["expected"] = sc.expected.value
    out["world"] = world_to_dict(sc.world)
    for section in SECTIONS:
        out[section] = to_dict(getattr(sc.configs, section))
    return out


def dump_suite(scenarios: Sequence[ScenarioDef]) -> str:
    doc = {"schema_version": SCHEMA_VERSION,
           "scenarios": [scenario_to_dict(sc) for sc in scenarios]}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, width=100)


def _default_configs(world: WorldModel) -> Configs:
    heading = math.atan2(world.asv_target[1] - world.asv_start[1],
                         world.asv_target[0] - world.asv_start[0])
    return Configs(planner=PlannerConfig(waypoints=(world.asv_target,), heading=heading))


def apply_sections(cfg: Configs, data, where: str) -> Configs:
    """Apply the config sections present in ``data`` (other keys are ignored)."""
    changes = {}
    for section in SECTIONS:
        if section in data:
            changes[section] = merge(getattr(cfg, section), data[section], f"{where}.{section}")
    if not changes:
        return cfg
    # keep the integrator step consistent unless the file sets it explicitly
    if "sim" in changes:
        dt = changes["sim"].dt
        for name in ("asv_dynamics", "auv_dynamics"):
            dyn = changes.get(name, getattr(cfg, name))
            if name not in data or "dt_s" not in data[name]:
                changes[name] = replace(dyn, dt=dt)
    try:
        return replace(cfg, **changes)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}", _line(data)) from None


def _enum(value, kind, where, line):
    try:
        return kind(value)
    except ValueError:
        choices = ", ".join(m.value for m in kind)
        raise ConfigError(f"{where}: {value!r} is not one of {choices}", line) from None


def _scenario(data, defaults, where: str) -> ScenarioDef:
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping", _line(data))
    for key in data:
        if key not in _SCENARIO_META and key not in SECTIONS:
            raise ConfigError(f"unknown key {where}.{key}", _line(data, key))
    mode = _enum(data.get("mode", Mode.DOG_WALKING.value), Mode, f"{where}.mode",
                 _line(data, "mode"))
    if "builtin" in data:
        name = data["builtin"]
        if name not in BUILTIN_NAMES:
            raise ConfigError(f"{where}.builtin: unknown scenario {name!r}",
                              _line(data, "builtin"))
        base = builtin(name, mode)
        world = merge_world(base.world, data["world"]) if "world" in data else base.world
        cfg, expected, sc_name = base.configs, base.expected, base.name
    else:
        if "world" not in data:
            raise ConfigError(f"{where}: needs either builtin or world", _line(data))
        world = merge_world(None, data["world"], f"{where}.world")
        cfg, expected, sc_name = _default_configs(world), None, None
    if defaults:
        cfg = apply_sections(cfg, defaults, "defaults")
    cfg = apply_sections(cfg, data, where)
    if "expected" in data:
        expected = (None if data["expected"] is None else
                    _enum(data["expected"], Status, f"{where}.expected",
                          _line(data, "expected")))
    sc_name = str(data.get("name", sc_name or f"scenario{where.split('[')[-1].rstrip(']')}"))
    return ScenarioDef(sc_name, world, cfg, mode, expected)


@dataclass(frozen=True)
class Suite:
    scenarios: Tuple[ScenarioDef, ...]
    sweep: Tuple[Tuple[str, Tuple[Any, ...]], ...] = ()


def parse_suite(text: str) -> Suite:
    doc = load_text(text)
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a mapping", _line(doc) or 1)
    for key in doc:
        if key not in ("schema_version", "defaults", "scenarios", "sweep"):
            raise ConfigError(f"unknown key {key}", _line(doc, key))
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}",
                          _line(doc, "schema_version") or 1)
    defaults = doc.get("defaults") or {}
    if not isinstance(defaults, dict):
        raise ConfigError("defaults: expected a mapping", _line(doc, "defaults"))
    for key in defaults:
        if key not in SECTIONS:
            raise ConfigError(f"unknown key defaults.{key}", _line(defaults, key))
    items = doc.get("scenarios")
    if not isinstance(items, list) or not items:
        raise ConfigError("scenarios: expected a non-empty list", _line(doc, "scenarios"))
    scenarios = tuple(_scenario(item, defaults, f"scenarios[{i}]")
                      for i, item in enumerate(items))
    names = [sc.name for sc in scenarios]
    for i, name in enumerate(names):
        if name in names[:i]:
            raise ConfigError(f"duplicate scenario name {name!r}", _line(items[i]))
    sweep = doc.get("sweep") or {}
    if not isinstance(sweep, dict):
        raise ConfigError("sweep: expected a mapping", _line(doc, "sweep"))
    axes = []
    for key, values in sweep.items():
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep.{key}: expected a non-empty list", _line(sweep, key))
        # validate the key and every value against the first scenario
        for v in values:
            set_values(scenarios[0], [(key, v)], _line(sweep, key))
        axes.append((key, tuple(values)))
    return Suite(scenarios, tuple(axes))


def set_values(sc: ScenarioDef, pairs: Sequence[Tuple[str, Any]],
               line: Optional[int] = None) -> ScenarioDef:
    """Set dotted file keys such as ``paradigm.beta`` or ``world.tank.length_x_m``.

    All pairs are merged first and applied together, so related limits can be
    changed in one go.
    """
    world_data: Dict[str, Any] = {}
    cfg_data: Dict[str, Any] = {}
    for dotted, value in pairs:
        parts = dotted.split(".")
        if len(parts) < 2 or not all(parts):
            raise ConfigError(f"override key {dotted!r} needs a section, e.g. sim.seed", line)
        head = parts[0]
        if head != "world" and head not in SECTIONS:
            raise ConfigError(f"unknown key {head}", line)
        node = world_data if head == "world" else cfg_data.setdefault(head, {})
        for part in parts[1:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override key {dotted!r} conflicts with another override", line)
        node[parts[-1]] = value
    try:
        if world_data:
            sc = replace(sc, world=merge_world(sc.world, world_data))
        if cfg_data:
            sc = replace(sc, configs=apply_sections(sc.configs, cfg_data, "override"))
    except ConfigError as exc:
        if exc.line is None and line is not None:
            raise ConfigError(str(exc), line) from None
        raise
    return sc


def parse_override(text: str) -> Tuple[str, Any]:
    if "=" not in text:
        raise ConfigError(f"override {text!r} must look like KEY=VALUE")
    key, raw = text.split("=", 1)
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError:
        raise ConfigError(f"override {text!r}: unparsable value") from None
    return key.strip(), value


@dataclass(frozen=True)
class RunSpec:
    """One concrete run after sweep expansion and overrides."""

    run_id: str
    scenario: ScenarioDef
    sweep_point: Tuple[Tuple[str, Any], ...] = ()


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def expand(suite: Suite, overrides: Sequence[Tuple[str, Any]] = ()) -> List[RunSpec]:
    """Cartesian product of sweep values for every scenario, then ``--set`` overrides."""
    keys = [k for k, _ in suite.sweep]
    grids = list(itertools.product(*(v for _, v in suite.sweep))) if keys else [()]
    runs = []
    for sc in suite.scenarios:
        for point in grids:
            run_sc = set_values(sc, list(zip(keys, point)) + list(overrides))
            tag = "__".join(f"{k}={_fmt(v)}" for k, v in zip(keys, point))
            run_id = f"{sc.name}__{tag}" if tag else sc.name
            runs.append(RunSpec(run_id, run_sc, tuple(zip(keys, point))))
    return runs


def builtin_suite(name: str) -> List[ScenarioDef]:
    """``case1`` gives both modes; ``case1_baseline`` gives one."""
    for base in BUILTIN_NAMES:
        for mode in Mode:
            if name == f"{base}_{mode.value.lower()}":
                return [builtin(base, mode)]
    if name in BUILTIN_NAMES:
        return [builtin(name, mode) for mode in (Mode.BASELINE, Mode.DOG_WALKING)]
    raise ConfigError(f"unknown builtin scenario {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
