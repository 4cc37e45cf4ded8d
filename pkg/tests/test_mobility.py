import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndtaodv.mobility import Mobility, Position, UnknownNode, WaypointLeg


def rwp(seed=3, pause=0.0, vmin=1.0, vmax=20.0, nodes=25, duration=100.0):
    return Mobility.random_waypoint(nodes, 1000, 1000, duration, pause, vmin, vmax, seed)


def test_initial_positions_inside_terrain():
    m = rwp()
    pos = m.positions(0.0)
    assert pos.shape == (25, 2)
    assert ((pos >= 0) & (pos <= 1000)).all()


def test_degenerate_speed_range():
    m = rwp(vmin=1.0, vmax=1.0, duration=2000)
    assert {leg.speed for legs in m.legs for leg in legs} == {1.0}


def test_same_seed_same_itinerary():
    assert rwp(seed=9).legs == rwp(seed=9).legs
    assert rwp(seed=9).legs != rwp(seed=10).legs


def test_pause_holds_position():
    leg = WaypointLeg(Position(0, 0), Position(100, 100), 10.0, 0.0, 5.0)
    m = Mobility([[leg]], 1000, 1000)
    for t in np.linspace(leg.arrive_at, leg.ends_at, 7):
        assert m.position_at(0, t) == (100, 100)


def test_linear_motion():
    leg = WaypointLeg(Position(0, 0), Position(100, 0), 10.0, 0.0, 0.0)
    m = Mobility([[leg]], 1000, 1000)
    assert m.position_at(0, 5.0) == pytest.approx((50.0, 0.0))
    assert m.xy(0, 5.0) == pytest.approx((50.0, 0.0))


def test_unknown_node():
    with pytest.raises(UnknownNode):
        rwp().position_at(99, 1.0)


def test_zero_pause_resumes_immediately():
    m = rwp(pause=0.0)
    for legs in m.legs:
        for a, b in zip(legs, legs[1:]):
            assert b.depart_at == a.arrive_at
            assert b.start == a.dest


def test_positions_stay_inside_terrain_over_run():
    m = rwp(seed=5, pause=5.0)
    for t in np.arange(0, 100.01, 0.25):
        p = m.positions(float(t))
        assert ((p >= -1e-9) & (p <= 1000 + 1e-9)).all()


def test_vectorised_path_matches_leg_lookup():
    # positions() walks legs incrementally; position_at() bisects. Same answer.
    m = rwp(seed=11, pause=2.0)
    for t in np.arange(0, 100, 0.37):
        fast = m.positions(float(t))
        for node in range(0, 25, 4):
            assert fast[node] == pytest.approx(m.position_at(node, float(t)), abs=1e-9)
            assert m.xy(node, float(t)) == pytest.approx(fast[node], abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(t=st.floats(0, 99), dt=st.floats(0, 1), node=st.integers(0, 24))
def test_continuity(t, dt, node):
    m = rwp(seed=2, pause=3.0)
    a = m.position_at(node, t)
    b = m.position_at(node, t + dt)
    assert math.dist(a, b) <= m.v_max * dt + 1e-9


def test_static_nodes_never_move():
    m = Mobility.static([(1, 2), (3, 4)])
    assert m.position_at(1, 1e6) == (3, 4)
    assert m.positions(500.0).tolist() == [[1, 2], [3, 4]]
