"""Constant-bit-rate flows between legitimate nodes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import TRAFFIC_TICK
from .packets import DataPacket


class InsufficientNodes(ValueError):
    pass


@dataclass(frozen=True)
class Flow:
    id: int
    src: int
    dst: int
    packet_size: int
    interval: float
    start_at: float
    stop_at: float

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("flow endpoints must differ")

    def expected_packets(self) -> int:
        """Closed-form number of ticks in [start_at, stop_at]."""
        if self.stop_at < self.start_at:
            return 0
        return math.floor((self.stop_at - self.start_at) / self.interval + 1e-9) + 1


def setup_flows(cfg, rng: np.random.Generator) -> list[Flow]:
    if cfg.connections == 0:
        return []
    bad = set(cfg.malicious_nodes())
    legit = [i for i in range(cfg.nodes) if i not in bad]
    if len(legit) < 2:
        raise InsufficientNodes(f"need two legitimate nodes, have {len(legit)}")
    max_pairs = len(legit) * (len(legit) - 1)
    if cfg.connections > max_pairs:
        raise InsufficientNodes(f"{cfg.connections} flows but only {max_pairs} distinct pairs")
    pairs: list[tuple[int, int]] = []
    while len(pairs) < cfg.connections:
        a, b = rng.choice(len(legit), size=2, replace=False)
        pair = (legit[int(a)], legit[int(b)])
        if pair not in pairs:
            pairs.append(pair)
    stop = cfg.duration - cfg.flow_stop_margin
    return [Flow(i, s, d, cfg.packet_size, cfg.cbr_interval,
                 float(rng.uniform(cfg.flow_start_min, cfg.flow_start_max)), stop)
            for i, (s, d) in enumerate(pairs)]


class CbrSource:
    """Emits one packet per ``flow.interval`` into the source's AODV node."""

    def __init__(self, flow: Flow, node, counters):
        self.flow = flow
        self.node = node
        self.counters = counters
        self.sent = 0

    def start(self) -> None:
        if self.flow.expected_packets():
            self.node.engine.at(self.flow.start_at, self.flow.src, TRAFFIC_TICK, self.traffic_tick,
                                detail=f"flow={self.flow.id}")

    def traffic_tick(self) -> None:
        f = self.flow
        pkt = DataPacket(f.id, self.sent, f.src, f.dst, f.packet_size, self.node.engine.now)
        self.sent += 1
        self.counters.sent(pkt)
        self.node.forward_data(pkt)
        if self.sent < f.expected_packets():
            self.node.engine.at(f.start_at + self.sent * f.interval, f.src, TRAFFIC_TICK,
                                self.traffic_tick, detail=f"flow={f.id}")
