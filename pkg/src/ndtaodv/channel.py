"""Unit-disk wireless medium.

Two MAC models are available:

``ideal``
    Every send is transmitted immediately; receivers get the packet
    ``per_hop_delay`` later. No contention.

``csma``
    Each node owns a drop-tail interface queue. A transmission occupies the
    medium of the sender and every node in its range for the packet's airtime
    (802.11 DSSS timing, mean backoff, no collisions), and a node only starts
    its next transmission once its own medium is idle. Receivers get the
    packet ``airtime + per_hop_delay`` after transmission start.

Neighborhoods are always evaluated at transmission start.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .engine import PACKET_DELIVERY, TIMER_FIRE, Engine
from .metrics import Counters
from .mobility import Mobility

PLCP = 192e-6
DIFS = 50e-6
SIFS = 10e-6
SLOT = 20e-6
CW_MIN = 31
MAC_HEADER = 28
IP_UDP_HEADER = 28
ACK_SIZE = 14

# seconds over which a pairwise in/out-of-range classification is reused
NEIGHBOR_WINDOW = 0.05


class DeliveryOutcome(enum.Enum):
    DELIVERED = "delivered"
    QUEUED = "queued"
    LINK_BROKEN = "link_broken"
    DROPPED = "dropped"


@dataclass(frozen=True)
class ChannelParams:
    range: float = 250.0
    per_hop_delay: float = 0.002
    loss_rate: float = 0.0
    mac: str = "csma"
    data_rate: float = 2e6
    basic_rate: float = 1e6
    ifq_len: int = 50

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError("range must be > 0")
        if not 0 <= self.loss_rate < 1:
            raise ValueError("loss_rate must be in [0, 1)")

    @classmethod
    def from_config(cls, cfg) -> "ChannelParams":
        return cls(cfg.range, cfg.per_hop_delay, cfg.loss_rate, cfg.mac,
                   cfg.data_rate, cfg.basic_rate, cfg.ifq_len)

    def airtime(self, size: int, unicast: bool) -> float:
        if self.mac == "ideal":
            return 0.0
        frame = (MAC_HEADER + IP_UDP_HEADER + size) * 8
        t = DIFS + CW_MIN / 2 * SLOT + PLCP
        if unicast:
            return t + frame / self.data_rate + SIFS + PLCP + ACK_SIZE * 8 / self.basic_rate
        return t + frame / self.basic_rate


def _delivery_detail(pkt, sender):
    return f"from={sender} {pkt.describe()}"


class Channel:
    """Broadcast medium shared by all nodes of one scenario.

    ``receive(node, pkt, prev_hop)`` is called for every delivered packet and
    ``link_failed(node, pkt, next_hop)`` when a unicast finds its next hop out
    of range at transmission time.
    """

    def __init__(self, engine: Engine, mobility: Mobility, params: ChannelParams,
                 counters: Counters, rng: np.random.Generator,
                 receive: Callable, link_failed: Callable):
        self.engine = engine
        self.mobility = mobility
        self.params = params
        self.counters = counters
        self.rng = rng
        self.receive = receive
        self.link_failed = link_failed
        self._r2 = params.range ** 2
        n = mobility.n
        self._csma = params.mac == "csma"
        self._queues = [deque() for _ in range(n)]
        self._busy = [0.0] * n
        self._servicing = [False] * n
        self._win_lo = -math.inf
        self._win_hi = -math.inf

    # -- geometry ------------------------------------------------------------

    def _rebuild(self, t: float) -> None:
        """Classify every pair as surely in range, surely out, or borderline
        for the window [t, t + NEIGHBOR_WINDOW]."""
        pos = self.mobility.positions(t)
        diff = pos[:, None, :] - pos[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        np.fill_diagonal(d2, np.inf)
        margin = 2 * self.mobility.v_max * NEIGHBOR_WINDOW
        r = self.params.range
        lo = (r - margin) ** 2 if r > margin else -1.0
        hi = (r + margin) ** 2
        sure = d2 <= lo
        maybe = (d2 > lo) & (d2 <= hi)
        self._sure = [np.flatnonzero(row).tolist() for row in sure]
        self._maybe = [np.flatnonzero(row).tolist() for row in maybe]
        self._win_lo = t
        self._win_hi = t + NEIGHBOR_WINDOW

    def _neighbor_list(self, node: int, t: float) -> list:
        if not self._win_lo <= t <= self._win_hi:
            self._rebuild(t)
        maybe = self._maybe[node]
        if not maybe:
            return self._sure[node]
        xy = self.mobility.xy
        px, py = xy(node, t)
        out = list(self._sure[node])
        r2 = self._r2
        for j in maybe:
            qx, qy = xy(j, t)
            if (qx - px) ** 2 + (qy - py) ** 2 <= r2:
                out.append(j)
        out.sort()
        return out

    def neighbors(self, node: int, t: Optional[float] = None) -> set:
        """Nodes within range of ``node`` at time ``t`` (default: now)."""
        t = self.engine.now if t is None else t
        if t < self._win_lo:
            p = self.mobility.position_at(node, t)
            return {j for j in range(self.mobility.n) if j != node
                    and math.dist(p, self.mobility.position_at(j, t)) <= self.params.range}
        return set(self._neighbor_list(node, t))

    # -- sending ---------------------------------------------------------------

    def broadcast(self, sender: int, pkt) -> DeliveryOutcome:
        return self._send(sender, pkt, None)

    def unicast(self, sender: int, next_hop: int, pkt) -> DeliveryOutcome:
        return self._send(sender, pkt, next_hop)

    def queue_length(self, node: int) -> int:
        return len(self._queues[node])

    def _send(self, sender, pkt, next_hop):
        if not self._csma:
            return self._transmit(sender, pkt, next_hop, self.engine.now)
        q = self._queues[sender]
        if len(q) >= self.params.ifq_len:
            self.counters.drops["ifq_" + pkt.kind.lower()] += 1
            return DeliveryOutcome.DROPPED
        q.append((pkt, next_hop))
        if not self._servicing[sender]:
            self._servicing[sender] = True
            self.engine.at(max(self.engine.now, self._busy[sender]), sender, TIMER_FIRE,
                           self._service, sender, detail="mac")
        return DeliveryOutcome.QUEUED

    def _service(self, sender: int) -> None:
        now = self.engine.now
        busy = self._busy[sender]
        if busy > now:
            self.engine.at(busy, sender, TIMER_FIRE, self._service, sender, detail="mac")
            return
        q = self._queues[sender]
        pkt, next_hop = q.popleft()
        self._transmit(sender, pkt, next_hop, now)
        if q:
            self.engine.at(self._busy[sender], sender, TIMER_FIRE, self._service, sender,
                           detail="mac")
        else:
            self._servicing[sender] = False

    def _transmit(self, sender, pkt, next_hop, t) -> DeliveryOutcome:
        nbrs = self._neighbor_list(sender, t)
        c = self.counters
        c.tx_by_kind[pkt.kind] += 1
        if pkt.control:
            c.routing_tx += 1
        air = self.params.airtime(pkt.size, next_hop is not None)
        if air:
            end = t + air
            busy = self._busy
            busy[sender] = end
            for j in nbrs:
                if busy[j] < end:
                    busy[j] = end
        at = t + air + self.params.per_hop_delay
        loss = self.params.loss_rate
        if next_hop is None:
            receivers = nbrs
            if loss and receivers:
                keep = self.rng.random(len(receivers)) >= loss
                receivers = [j for j, k in zip(receivers, keep) if k]
            if receivers:
                self.engine.at(at, tuple(receivers), PACKET_DELIVERY, self.receive, pkt, sender,
                               detail=(_delivery_detail, pkt, sender))
            return DeliveryOutcome.DELIVERED
        if next_hop not in nbrs:
            self.engine.at(t, sender, TIMER_FIRE, self.link_failed, sender, pkt, next_hop,
                           detail=f"link_broken {sender}->{next_hop}")
            return DeliveryOutcome.LINK_BROKEN
        if loss and self.rng.random() < loss:
            c.drops["loss"] += 1
            return DeliveryOutcome.DELIVERED
        self.engine.at(at, (next_hop,), PACKET_DELIVERY, self.receive, pkt, sender,
                       detail=(_delivery_detail, pkt, sender))
        return DeliveryOutcome.DELIVERED
