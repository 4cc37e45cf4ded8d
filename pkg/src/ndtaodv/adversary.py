"""RREQ flooding attacker.

The attacker floods route requests for addresses that do not belong to any
node, with maximum TTL, ignoring the RREQ rate limit and never waiting for a
reply. Otherwise it behaves like an ordinary AODV node (it still relays other
nodes' traffic).
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import TIMER_FIRE
from .packets import RreqPacket


@dataclass(frozen=True)
class AttackerParams:
    flood_interval: float = 0.009
    start_at: float = 0.0
    stop_at: float = 100.0
    void_base: int = 25  # first address not owned by a node
    void_pool_size: int = 64

    def __post_init__(self):
        if not self.flood_interval > 0:
            raise ValueError("flood_interval must be > 0")
        if self.void_pool_size < 1:
            raise ValueError("void pool must be non-empty")

    @classmethod
    def from_config(cls, cfg) -> "AttackerParams":
        return cls(cfg.flood_interval, cfg.attack_start, cfg.attack_stop_time,
                   cfg.nodes, cfg.void_pool_size)

    @property
    def void_pool(self) -> range:
        return range(self.void_base, self.void_base + self.void_pool_size)


class FloodAttacker:
    """Drives the FloodTimer of one malicious node."""

    def __init__(self, node, params: AttackerParams):
        self.node = node
        self.params = params
        self.sent = 0
        self._ticks = 0

    def start(self) -> None:
        p = self.params
        if p.start_at <= p.stop_at:
            self.node.engine.at(p.start_at, self.node.id, TIMER_FIRE, self.flood_tick,
                                detail="flood_timer")

    def flood_tick(self) -> None:
        node, p = self.node, self.params
        node.seq += 1
        node.rreq_id += 1
        dest = p.void_base + self.sent % p.void_pool_size
        node.seen[(node.id, node.rreq_id)] = node.engine.now + node.params.path_discovery_time
        node.counters.rreq_originated += 1
        node.channel.broadcast(node.id, RreqPacket(
            node.id, node.seq, node.rreq_id, dest, None, 0, node.params.net_diameter))
        self.sent += 1
        self._ticks += 1
        nxt = p.start_at + self._ticks * p.flood_interval
        if nxt <= p.stop_at:
            node.engine.at(nxt, node.id, TIMER_FIRE, self.flood_tick, detail="flood_timer")
