"""Trace tables, metadata sidecars, suite summaries and top-down SVG plots.

Floats are written with ``repr`` so they round-trip exactly, and identical runs
produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .config import SCHEMA_VERSION, world_to_dict
from .engine import SimOutcome, TraceRecord
from .scenarios import RunMetrics, ScenarioDef

_STATE = ("x", "y", "z", "roll", "pitch", "yaw")
_VEL = ("vx", "vy", "vz", "wroll", "wpitch", "wyaw")
_CMD = ("x", "y", "z", "roll", "pitch", "yaw")
_COMMANDS = ("planner", "asv_ibvs", "auv_ibvs", "avoidance", "depth_hold", "asv_cmd", "auv_cmd")

TRACE_COLUMNS: Tuple[str, ...] = (
    ("t",)
    + tuple(f"asv_{c}" for c in _STATE + _VEL)
    + tuple(f"auv_{c}" for c in _STATE + _VEL)
    + ("asv_view_u", "asv_view_v", "asv_view_region",
       "auv_view_u", "auv_view_v", "auv_view_region",
       "sonar_range_m", "wall_distance_m", "relative_yaw_rad")
    + tuple(f"{name}_{c}" for name in _COMMANDS for c in _CMD)
    + ("yank_radps", "k_p", "k_v", "lam", "mu", "yank_active", "yank_started",
       "target_captured", "level")
)

SUMMARY_COLUMNS = (
    "run_id", "scenario", "mode", "expected", "status", "matched", "final_time_s",
    "time_to_target_s", "min_obstacle_clearance_m", "min_wall_clearance_m",
    "min_abs_wall_distance_m", "formation_in_view_fraction", "lambda_flips", "yank_count",
    "weighting_activations", "asv_path_length_m", "auv_path_length_m", "obstacles_passed",
)

LEVEL_COLORS = {0: "#2ca02c", 1: "#1f77b4", 2: "#9467bd"}


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _pixel(view) -> Tuple[Optional[float], Optional[float]]:
    return view.tag_pixel if view.tag_pixel is not None else (None, None)


def trace_row(r: TraceRecord) -> List[str]:
    row = [r.t]
    for s in (r.asv, r.auv):
        row += [s.x, s.y, s.z, s.roll, s.pitch, s.yaw, *s.velocity]
    for view in (r.asv_view, r.auv_view):
        row += [*_pixel(view), view.region.value]
    row += [r.sonar.range, r.wall_distance, r.relative_yaw]
    for name in _COMMANDS:
        c = getattr(r, name)
        row += [c.x, c.y, c.z, c.roll, c.pitch, c.yaw]
    row += [r.yank, r.k_p, r.k_v, r.lam, r.mu, r.yank_active, r.yank_started,
            r.target_captured, r.level]
    return [_num(v) for v in row]


def trace_csv(trace: Iterable[TraceRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in trace:
        w.writerow(trace_row(r))
    return buf.getvalue()


def metrics_dict(m: RunMetrics) -> Dict[str, object]:
    return {
        "status": m.status.value,
        "time_to_target_s": m.time_to_target,
        "min_obstacle_clearance_m": _finite(m.min_obstacle_clearance),
        "min_wall_clearance_m": m.min_wall_clearance,
        "min_abs_wall_distance_m": m.min_abs_wall_distance,
        "formation_in_view_fraction": m.formation_in_view_fraction,
        "lambda_flips": m.lambda_flips,
        "yank_count": m.yank_count,
        "weighting_activations": m.weighting_activations,
        "asv_path_length_m": m.asv_path_length,
        "auv_path_length_m": m.auv_path_length,
        "obstacles_passed": list(m.obstacles_passed),
    }


def _finite(v: float):
    # JSON has no infinity; an empty world reports no clearance
    return v if math.isfinite(v) else None


def meta_json(run_id: str, sc: ScenarioDef, outcome: SimOutcome, m: RunMetrics,
              sweep_point: Sequence[Tuple[str, object]] = ()) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "run_id": run_id,
        "scenario": sc.name,
        "mode": sc.mode.value,
        "expected": sc.expected.value if sc.expected else None,
        "status": outcome.status.value,
        "final_time_s": outcome.final_time,
        "seed": sc.configs.sim.seed,
        "sweep": {k: v for k, v in sweep_point},
        "world": world_to_dict(sc.world),
        "metrics": metrics_dict(m),
        "columns": list(TRACE_COLUMNS),
    }
    return json.dumps(doc, indent=2) + "\n"


def summary_row(run_id: str, sc: ScenarioDef, outcome: SimOutcome, m: RunMetrics) -> List[str]:
    matched = sc.expected is None or outcome.status == sc.expected
    vals = [run_id, sc.name, sc.mode.value, sc.expected.value if sc.expected else "",
            outcome.status.value, matched, outcome.final_time, m.time_to_target,
            _finite(m.min_obstacle_clearance), m.min_wall_clearance, m.min_abs_wall_distance,
            m.formation_in_view_fraction, m.lambda_flips, m.yank_count,
            m.weighting_activations, m.asv_path_length, m.auv_path_length,
            "".join(m.obstacles_passed)]
    return [_num(v) for v in vals]


def summary_csv(rows: Iterable[List[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()


def meta_path_for(trace_path: str) -> str:
    root, _ = os.path.splitext(trace_path)
    return root + ".meta.json"


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- plotting

class TraceError(ValueError):
    pass


def read_trace(path: str) -> Tuple[List[Dict[str, str]], Dict]:
    """Rows of a trace file plus its metadata sidecar."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "asv_x" not in reader.fieldnames:
            raise TraceError(f"{path}: not a trace file")
        rows = list(reader)
    if not rows:
        raise TraceError(f"{path}: trace is empty")
    meta_path = meta_path_for(path)
    meta = {}
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
    return rows, meta


def _level_runs(points, levels):
    """Split a polyline into maximal pieces of constant level (pieces share endpoints)."""
    runs = []
    start = 0
    for i in range(1, len(points)):
        if levels[i] != levels[start]:
            runs.append((levels[start], points[start:i + 1]))
            start = i
    runs.append((levels[start], points[start:]))
    return [(lvl, pts) for lvl, pts in runs if len(pts) > 1]


def svg_plot(rows: Sequence[Dict[str, str]], meta: Dict, scale: float = 100.0) -> str:
    """Top-down view: tank, obstacles, both paths coloured by protocol level."""
    try:
        asv = [(float(r["asv_x"]), float(r["asv_y"])) for r in rows]
        auv = [(float(r["auv_x"]), float(r["auv_y"])) for r in rows]
        levels = [int(r["level"]) for r in rows]
    except (KeyError, ValueError) as exc:
        raise TraceError(f"malformed trace row: {exc}") from None
    world = meta.get("world") or {}
    tank = world.get("tank") or {}
    length = float(tank.get("length_x_m", max(x for x, _ in asv + auv) + 0.5))
    width = float(tank.get("width_y_m", max(y for _, y in asv + auv) + 0.5))
    pad = 20.0
    w_px, h_px = length * scale + 2 * pad, width * scale + 2 * pad

    def px(p):
        # +y is to the left when facing +x, so it is drawn upwards
        return f"{pad + p[0] * scale:.2f},{pad + (width - p[1]) * scale:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_px:.0f}" height="{h_px:.0f}" '
        f'viewBox="0 0 {w_px:.2f} {h_px:.2f}">',
        f'<title>{_esc(meta.get("run_id", "trace"))} ({_esc(meta.get("status", ""))})</title>',
        f'<rect class="tank" x="{pad}" y="{pad}" width="{length * scale:.2f}" '
        f'height="{width * scale:.2f}" fill="#f4f8fb" stroke="#333" stroke-width="2"/>',
    ]
    for ob in world.get("obstacles", []):
        label = _esc(ob.get("label", ""))
        if ob.get("kind") == "circle":
            cx, cy = px(ob["center_m"]).split(",")
            out.append(f'<circle class="obstacle" data-label="{label}" cx="{cx}" cy="{cy}" '
                       f'r="{ob["radius_m"] * scale:.2f}" fill="#999" stroke="#555"/>')
        else:
            (x0, y0), (x1, y1) = ob["lo_m"], ob["hi_m"]
            sx, sy = px((x0, y1)).split(",")
            out.append(f'<rect class="obstacle" data-label="{label}" x="{sx}" y="{sy}" '
                       f'width="{(x1 - x0) * scale:.2f}" height="{(y1 - y0) * scale:.2f}" '
                       f'fill="#999" stroke="#555"/>')
    for robot, pts, dash in (("asv", asv, ""), ("auv", auv, ' stroke-dasharray="6,3"')):
        # one polyline per robot, with level-coloured pieces drawn over it
        out.append(f'<g class="trajectory" data-robot="{robot}">')
        out.append(f'<polyline class="path" points="{" ".join(px(p) for p in pts)}" '
                   f'fill="none" stroke="#bbb" stroke-width="1"/>')
        for lvl, seg in _level_runs(pts, levels):
            d = "M" + " L".join(px(p) for p in seg)
            out.append(f'<path class="level{lvl}" d="{d}" fill="none" '
                       f'stroke="{LEVEL_COLORS.get(lvl, "#000")}" stroke-width="2"{dash}/>')
        out.append("</g>")
    start = world.get("asv_start_m", asv[0])
    target = world.get("asv_target_m")
    sx, sy = px(start).split(",")
    out.append(f'<circle class="start" cx="{sx}" cy="{sy}" r="6" fill="#000"/>')
    if target is not None:
        tx, ty = px(target).split(",")
        out.append(f'<path class="target" d="M{float(tx) - 7:.2f},{float(ty) - 7:.2f} '
                   f'L{float(tx) + 7:.2f},{float(ty) + 7:.2f} M{float(tx) - 7:.2f},'
                   f'{float(ty) + 7:.2f} L{float(tx) + 7:.2f},{float(ty) - 7:.2f}" '
                   f'stroke="#d62728" stroke-width="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s) -> str:
    return (str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))
