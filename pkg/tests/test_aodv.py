import pytest

from ndtaodv.aodv import Action, Outcome
from ndtaodv.packets import RrepPacket, RreqPacket

from conftest import bfs_hops, line_positions, static_sim


def rrep_actions(node):
    return [a for _, k, a in node.actions if k == "RREP"]


def test_first_discovery_sent_with_id_1():
    sim = static_sim(line_positions(3))
    n0 = sim.nodes[0]
    assert n0.originate_discovery(2) is Outcome.SENT
    assert n0.rreq_id == 1
    assert n0.originate_discovery(2) is Outcome.ALREADY_PENDING
    assert sim.counters.rreq_originated == 1


def test_rate_limit_eleventh_in_one_second():
    sim = static_sim([(0, 0), (100, 0)])
    n0 = sim.nodes[0]
    outs = [n0.originate_discovery(100 + i) for i in range(11)]
    assert outs == [Outcome.SENT] * 10 + [Outcome.RATE_LIMITED]
    # the deferred request goes out once the window slides
    sim.engine.run_until(1.5)
    assert len(n0.rreq_log) == 11
    assert n0.rreq_log[-1] == pytest.approx(1.0)


def test_line_route_hop_counts_match_bfs():
    pos = line_positions(4)
    sim = static_sim(pos)
    sim.nodes[0].originate_discovery(3)
    sim.engine.run_until(1.0)
    from_src, from_dst = bfs_hops(pos, 250.0, 0), bfs_hops(pos, 250.0, 3)
    assert sim.nodes[0].route(3).hop_count == from_src[3] == 3
    for node in (1, 2, 3):
        # reverse path set up by the request
        assert sim.nodes[node].route(0).hop_count == from_src[node]
    for node in (0, 1, 2):
        # forward path set up by the reply
        assert sim.nodes[node].route(3).hop_count == from_dst[node]


def test_duplicate_rreq_dropped():
    sim = static_sim(line_positions(3))
    n1 = sim.nodes[1]
    rreq = RreqPacket(0, 1, 1, 9, None, 0, 35)
    assert n1.handle_rreq(rreq, 0) is Action.REBROADCAST
    assert n1.handle_rreq(rreq, 0) is Action.DROP
    assert sim.counters.tx_by_kind["RREQ"] == 1


def test_destination_replies_with_own_seq():
    sim = static_sim(line_positions(2))
    n1 = sim.nodes[1]
    n1.seq = 7
    n1.actions = []
    sim.nodes[0].actions = []
    assert n1.handle_rreq(RreqPacket(0, 1, 1, 1, 3, 0, 35), 0) is Action.REPLY
    sim.engine.run_until(1)
    assert sim.nodes[0].route(1).dest_seq == 7
    assert rrep_actions(sim.nodes[0]) == [Action.CONSUME]


def test_destination_adopts_higher_requested_seq():
    sim = static_sim(line_positions(2))
    sim.nodes[1].handle_rreq(RreqPacket(0, 1, 1, 1, 12, 0, 35), 0)
    sim.engine.run_until(1)
    assert sim.nodes[0].route(1).dest_seq == 12


def test_stale_rrep_dropped_table_unchanged():
    sim = static_sim(line_positions(3))
    n0 = sim.nodes[0]
    n0.update_route(2, 1, 2, 10, 10.0)
    before = (n0.routes[2].next_hop, n0.routes[2].hop_count, n0.routes[2].dest_seq)
    assert n0.handle_rrep(RrepPacket(2, 5, 0, 0, 10.0), 1) is Action.DROP
    e = n0.routes[2]
    assert (e.next_hop, e.hop_count, e.dest_seq) == before


@pytest.mark.parametrize("order", [(3, 2), (2, 3)])
def test_equal_seq_rreps_keep_shorter(order):
    sim = static_sim([(0, 0), (100, 0), (0, 100), (500, 500)])
    n0 = sim.nodes[0]
    for hc, via in zip(order, (1, 2)):
        n0.handle_rrep(RrepPacket(3, 4, 0, hc - 1, 10.0), via)
    assert n0.routes[3].hop_count == 2


def test_link_break_without_routes_sends_no_rerr():
    sim = static_sim(line_positions(3))
    sim.nodes[0].handle_link_break(1)
    sim.engine.run_until(1)
    assert sim.counters.tx_by_kind["RERR"] == 0


def test_data_at_destination_is_delivered():
    from ndtaodv.packets import DataPacket
    sim = static_sim(line_positions(2), flows=[(0, 1, 1.0)])
    pkt = DataPacket(0, 0, 0, 1, 512, 0.0)
    assert sim.nodes[1].forward_data(pkt, 0) is Action.DELIVER
    assert sim.counters.data_delivered == 1


def test_source_without_route_buffers_and_discovers():
    from ndtaodv.packets import DataPacket
    sim = static_sim(line_positions(3), flows=[(0, 2, 1.0)])
    pkt = DataPacket(0, 0, 0, 2, 512, 0.0)
    assert sim.nodes[0].forward_data(pkt) is Action.BUFFER
    assert 2 in sim.nodes[0].pending
    sim.engine.run_until(1)
    assert sim.counters.data_delivered == 1


def test_hello_count_over_run():
    sim = static_sim(line_positions(3), duration=100.0)
    sim.run()
    # jittered start in [0, 1), then once per second up to t=100
    assert sim.counters.tx_by_kind["HELLO"] in range(3 * 99, 3 * 101 + 1)


def test_hello_silence_invalidates_route():
    from ndtaodv.packets import HelloPacket
    sim = static_sim(line_positions(2) + [(1000, 1000)])
    n0 = sim.nodes[0]
    # a neighbor that said hello once and then vanished
    n0.receive(HelloPacket(2, 1), 2)
    assert n0.route(2) is not None
    sim.engine.run_until(3.0)
    n0.hello_tick()
    assert n0.route(2) is None
    assert 2 not in n0.neighbors


@pytest.mark.parametrize("mac", ["ideal", "csma"])
def test_static_connected_topology_delivers_everything(mac):
    pos = [(0, 0), (200, 0), (400, 0), (200, 200), (400, 200)]
    flows = [(0, 4, 1.0), (4, 0, 1.3), (3, 2, 2.1)]
    sim = static_sim(pos, flows=flows, mac=mac, duration=30.0)
    rep = sim.run()
    assert rep.data_sent == sum(f.expected_packets() for f in sim.flows)
    assert rep.pdf == 1.0


def test_route_rediscovered_after_break():
    import math
    from ndtaodv import Mobility, ScenarioConfig, Simulation
    from ndtaodv.mobility import Position, WaypointLeg
    from ndtaodv.traffic import Flow

    def still(x, y):
        return [WaypointLeg(Position(x, y), Position(x, y), 1.0, 0.0, math.inf)]
    # 0 - 1 - 3 path; node 1 leaves at t=5, alternate relay 2 stays
    leaving = [WaypointLeg(Position(200, 0), Position(200, 0), 1.0, 0.0, 5.0),
               WaypointLeg(Position(200, 0), Position(200, 900), 200.0, 5.0, math.inf)]
    mob = Mobility([still(0, 0), leaving, still(200, 150), still(400, 0)], 1000, 1000)
    cfg = ScenarioConfig(nodes=4, duration=15.0, connections=1, mac="ideal")
    sim = Simulation(cfg, mobility=mob, flows=[Flow(0, 0, 3, 512, 0.25, 1.0, 14.0)])
    rep = sim.run()
    assert sim.nodes[0].route(3).next_hop == 2
    assert rep.data_delivered >= rep.data_sent - 8
    assert sim.counters.rreq_originated >= 2
