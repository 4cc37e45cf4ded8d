import math

import numpy as np
import pytest

from ndtaodv import ScenarioConfig, Simulation
from ndtaodv.adversary import AttackerParams
from ndtaodv.rng import stream
from ndtaodv.traffic import Flow, InsufficientNodes, setup_flows

from conftest import line_positions, static_sim


def test_flood_tick_count_matches_closed_form():
    sim = static_sim(line_positions(3), malicious_ids=[0], duration=100.0)
    sim.run()
    expected = math.floor(100 / 0.009) + 1  # ticks at 0, 0.009, ..., <= 100
    assert sim.attackers[0].sent == expected
    assert sim.attackers[0].sent == pytest.approx(11_111, abs=2)


def test_flood_targets_void_pool_with_max_ttl():
    sim = static_sim(line_positions(2), malicious_ids=[0], duration=1.0)
    seen = []
    sim.nodes[1].handle_rreq = lambda rreq, prev: seen.append(rreq)
    sim.run()
    p = AttackerParams.from_config(sim.config)
    assert {r.dest for r in seen} == set(p.void_pool)
    assert all(r.ttl == 35 and r.originator == 0 for r in seen)
    assert min(p.void_pool) == 2


def test_void_destinations_never_answered():
    cfg = ScenarioConfig(malicious=1, duration=20.0, seed=3)
    sim = Simulation(cfg)
    sim.run()
    void = set(AttackerParams.from_config(cfg).void_pool)
    # no node ever learnt a route to a void address, so nobody replied for one
    assert not any(d in void for n in sim.nodes for d in n.routes)
    legit_discoveries = sim.counters.rreq_originated - sim.attackers[0].sent
    assert sim.counters.tx_by_kind["RREQ"] > 10 * sim.attackers[0].sent
    assert legit_discoveries >= 1


def test_attacker_count_zero_is_inert():
    a = Simulation(ScenarioConfig(duration=10.0, seed=2), hash_trace=True).run()
    b = Simulation(ScenarioConfig(duration=10.0, seed=2, malicious=0, flood_interval=0.5),
                   hash_trace=True).run()
    assert a.trace_hash == b.trace_hash


def test_flows_avoid_malicious_nodes():
    cfg = ScenarioConfig(malicious=1)
    flows = setup_flows(cfg, stream(1, "traffic"))
    assert len(flows) == 5
    ends = {f.src for f in flows} | {f.dst for f in flows}
    assert 24 not in ends
    assert len({(f.src, f.dst) for f in flows}) == 5


def test_zero_connections():
    rep = Simulation(ScenarioConfig(connections=0, duration=5.0)).run()
    assert rep.data_sent == 0 and rep.pdf is None and rep.avg_throughput == 0.0


def test_flow_selection_is_seeded():
    cfg = ScenarioConfig(seed=5)
    assert setup_flows(cfg, stream(5, "traffic")) == setup_flows(cfg, stream(5, "traffic"))


def test_too_few_legitimate_nodes():
    with pytest.raises(InsufficientNodes):
        setup_flows(ScenarioConfig(nodes=3, malicious=2, connections=1), np.random.default_rng(0))


def test_cbr_count_closed_form():
    f = Flow(0, 0, 1, 512, 0.25, 5.0, 99.0)
    assert f.expected_packets() == math.floor(94 / 0.25) + 1 == 377
    sim = static_sim(line_positions(2), flows=[(0, 1, 5.0)], duration=100.0)
    assert sim.flows[0] == f
    sim.run()
    assert sim.sources[0].sent == 377
    assert sim.counters.data_sent == 377


def test_flow_stops_at_stop_time():
    sim = static_sim(line_positions(2), flows=[(0, 1, 1.0)], duration=10.0)
    sim.engine.run_until(0)
    sim._start()
    sim.engine.run_until(9.0)
    assert sim.sources[0].sent == 33
    sim.engine.run_until(10.0)
    assert sim.sources[0].sent == sim.flows[0].expected_packets() == 33
