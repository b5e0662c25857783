import math

import pytest

from dogwalk.control import (LEFT, RIGHT, AvoidanceConfig, DepthHoldConfig, IbvsConfig,
                             PlannerConfig, avoidance_command, depth_hold_command, ibvs_command,
                             planner_command)
from dogwalk.dynamics import ASV, AUV, ControlInput, RobotState
from dogwalk.perception import DOWN, UP, ImageObservation, Region, SonarReading


def view(u, v, region):
    return ImageObservation((u, v), region)


def test_centred_tag_gives_zero():
    assert ibvs_command(view(320, 240, Region.SAFE), IbvsConfig()) == ControlInput()


def test_integration_band_saturates_exactly():
    cfg = IbvsConfig(looking=DOWN, xi_max_y=0.2)
    cmd = ibvs_command(view(600, 240, Region.INTEGRATION), cfg)
    assert cmd.y == -0.2 and cmd.x == 0.0
    up = ibvs_command(view(600, 240, Region.INTEGRATION), IbvsConfig(looking=UP))
    assert up.y == 0.2


def test_safe_band_is_linear():
    cfg = IbvsConfig(gain_u=0.002, gain_v=0.002, xi_max_x=0.5, xi_max_y=0.5, looking=UP)
    assert abs(ibvs_command(view(370, 240, Region.SAFE), cfg).y) == pytest.approx(0.1)
    assert abs(ibvs_command(view(320, 290, Region.SAFE), cfg).x) == pytest.approx(0.1)


def test_out_of_view_has_no_command():
    with pytest.raises(ValueError):
        ibvs_command(ImageObservation(None, Region.OUT_OF_VIEW), IbvsConfig())


def test_avoidance_examples():
    assert avoidance_command(SonarReading(None, 3.0), AvoidanceConfig()) == ControlInput()
    sat = avoidance_command(SonarReading(0.3, 3.0),
                            AvoidanceConfig(alpha=0.3, xi_max_x=0.5, xi_max_y=0.5))
    assert (sat.x, sat.y) == (-0.5, 0.5)
    wide = AvoidanceConfig(alpha=0.3, xi_max_x=0.5, xi_max_y=0.5)
    right = avoidance_command(SonarReading(1.0, 3.0), wide, RIGHT)
    assert right.y == pytest.approx(-0.3) and right.x == pytest.approx(-0.3)
    assert avoidance_command(SonarReading(1.01, 3.0), AvoidanceConfig()) == ControlInput()


def test_lambda_flips_only_the_lateral_axis():
    cfg = AvoidanceConfig(alpha=0.1)
    left = avoidance_command(SonarReading(0.8, 3.0), cfg, LEFT)
    right = avoidance_command(SonarReading(0.8, 3.0), cfg, RIGHT)
    assert left.x == right.x and left.y == -right.y > 0


def test_planner_zero_at_goal():
    cfg = PlannerConfig(waypoints=((3.0, 2.0),))
    cmd, _ = planner_command(RobotState(ASV, 3.0, 2.0), cfg)
    assert cmd == ControlInput()


def test_planner_clamps_and_rotates():
    cfg = PlannerConfig(waypoints=((3.0, 2.0),), kp=0.5, max_speed=0.4, heading_gain=0.0)
    cmd, _ = planner_command(RobotState(ASV, 2.0, 2.0), cfg)
    assert cmd.x == pytest.approx(0.4) and cmd.y == pytest.approx(0.0)
    turned, _ = planner_command(RobotState(ASV, 2.0, 2.0, yaw=math.pi / 2), cfg)
    assert turned.y == pytest.approx(-0.4) and turned.x == pytest.approx(0.0, abs=1e-12)


def test_planner_advances_waypoints():
    cfg = PlannerConfig(waypoints=((1.0, 1.0), (3.0, 1.0)))
    _, idx = planner_command(RobotState(ASV, 1.05, 1.0), cfg, 0)
    assert idx == 1


def test_depth_hold_examples():
    cfg = DepthHoldConfig()
    assert depth_hold_command(RobotState(AUV, 1, 1, -1.5), cfg) == ControlInput()
    assert depth_hold_command(RobotState(AUV, 1, 1, -1.0), cfg).z < 0
    assert depth_hold_command(RobotState(AUV, 1, 1, -1.5, roll=0.1), cfg).roll < 0


@pytest.mark.parametrize("bad", [
    lambda: AvoidanceConfig(alpha=0.0), lambda: AvoidanceConfig(lam=0),
    lambda: IbvsConfig(gain_u=0.0), lambda: IbvsConfig(looking="side"),
    lambda: PlannerConfig(waypoints=()), lambda: PlannerConfig(waypoints=((1, 1),), capture_radius=0),
])
def test_invalid_configs_rejected(bad):
    with pytest.raises(ValueError):
        bad()
