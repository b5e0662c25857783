"""Leader-follower simulation of a surface vehicle walking an underwater vehicle
past obstacles, coordinated only through what each one sees."""
from .engine import Configs, Mode, SimConfig, SimOutcome, Status, TraceRecord, run
from .scenarios import BUILTIN_NAMES, RunMetrics, ScenarioDef, builtin, metrics
from .world import BoxObstacle, CircleObstacle, Tank, WorldModel

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES", "BoxObstacle", "CircleObstacle", "Configs", "Mode", "RunMetrics",
    "ScenarioDef", "SimConfig", "SimOutcome", "Status", "Tank", "TraceRecord", "WorldModel",
    "builtin", "metrics", "run",
]
