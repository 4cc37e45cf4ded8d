"""AODV route discovery and maintenance, one instance per node.

Simplifications relative to RFC 3561: every RREQ is flooded with the full
network TTL (no expanding ring search), there is no local repair, no
gratuitous RREP and no RREP-ACK. Link breaks are signalled with RERR.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .engine import TIMER_FIRE
from .packets import DataPacket, HelloPacket, RerrPacket, RrepPacket, RreqPacket


class Action(enum.Enum):
    REBROADCAST = "rebroadcast"
    REPLY = "reply"
    DROP = "drop"
    FORWARD = "forward"
    CONSUME = "consume"
    DELIVER = "deliver"
    BUFFER = "buffer"
    DROP_NO_ROUTE = "drop_no_route"


class Outcome(enum.Enum):
    SENT = "sent"
    RATE_LIMITED = "rate_limited"
    ALREADY_PENDING = "already_pending"


@dataclass(frozen=True)
class AodvParams:
    hello_interval: float = 1.0
    allowed_hello_loss: int = 2
    route_lifetime: float = 10.0
    rreq_retries: int = 2
    rreq_ratelimit: int = 10
    net_diameter: int = 35
    node_traversal_time: float = 0.04
    buffer_cap: int = 64

    @property
    def net_traversal_time(self) -> float:
        return 2 * self.node_traversal_time * self.net_diameter

    @property
    def path_discovery_time(self) -> float:
        return 2 * self.net_traversal_time

    @property
    def neighbor_timeout(self) -> float:
        return self.allowed_hello_loss * self.hello_interval

    @classmethod
    def from_config(cls, cfg) -> "AodvParams":
        return cls(cfg.hello_interval, cfg.allowed_hello_loss, cfg.route_lifetime,
                   cfg.rreq_retries, cfg.rreq_ratelimit, cfg.net_diameter,
                   cfg.node_traversal_time, cfg.buffer_cap)


@dataclass(slots=True)
class RouteEntry:
    dest: int
    next_hop: int
    hop_count: int
    dest_seq: Optional[int]
    expires_at: float
    valid: bool = True
    precursors: set = field(default_factory=set)


class Discovery:
    __slots__ = ("retries", "timer")

    def __init__(self):
        self.retries = 0
        self.timer = None


class AodvNode:
    """Routing state and packet handlers for one node.

    ``ndt`` is an :class:`~ndtaodv.ndt.NdtState` when the node runs the flood
    defense, else ``None``.
    """

    def __init__(self, node_id: int, engine, channel, params: AodvParams, counters,
                 ndt=None, malicious: bool = False):
        self.id = node_id
        self.engine = engine
        self.channel = channel
        self.params = params
        self.counters = counters
        self.ndt = ndt
        self.malicious = malicious
        self.seq = 0
        self.rreq_id = 0
        self.routes: dict[int, RouteEntry] = {}
        self.seen: dict[tuple, float] = {}
        self.neighbors: dict[int, float] = {}
        self.pending: dict[int, Discovery] = {}
        self.buffer: dict[int, deque] = {}
        self._rreq_window: deque = deque()
        self.rreq_log: list[float] = []
        self.actions: Optional[list] = None  # set to [] to record (time, kind, Action)

    def __repr__(self):
        return f"AodvNode({self.id})"

    # -- route table -----------------------------------------------------------

    def route(self, dest: int) -> Optional[RouteEntry]:
        """The usable route to ``dest``, or None. Expired routes are invalidated."""
        e = self.routes.get(dest)
        if e is None or not e.valid:
            return None
        if e.expires_at <= self.engine.now:
            e.valid = False
            return None
        return e

    def update_route(self, dest: int, next_hop: int, hop_count: int,
                     dest_seq: Optional[int], lifetime: float) -> bool:
        """Install or refresh a route if the new one is fresher or shorter.

        Freshness is ordered by (dest_seq, -hop_count). Information without a
        sequence number only fills entries that are unusable.
        """
        now = self.engine.now
        e = self.routes.get(dest)
        if e is None:
            self.routes[dest] = RouteEntry(dest, next_hop, hop_count, dest_seq, now + lifetime)
            self._route_ready(dest)
            return True
        usable = e.valid and e.expires_at > now
        if e.dest_seq is None:
            ok = dest_seq is not None or not usable or hop_count < e.hop_count
        elif dest_seq is None:
            ok = not usable
            dest_seq = e.dest_seq
        elif dest_seq != e.dest_seq:
            ok = dest_seq > e.dest_seq
        else:
            ok = not usable or hop_count < e.hop_count
        if not ok:
            if usable and e.next_hop == next_hop and e.hop_count == hop_count:
                e.expires_at = max(e.expires_at, now + lifetime)
            return False
        if e.next_hop != next_hop:
            e.precursors = set()
        e.next_hop = next_hop
        e.hop_count = hop_count
        e.dest_seq = dest_seq
        e.expires_at = max(e.expires_at, now + lifetime) if usable else now + lifetime
        e.valid = True
        self._route_ready(dest)
        return True

    def _route_ready(self, dest: int) -> None:
        d = self.pending.pop(dest, None)
        if d is not None:
            self.engine.cancel(d.timer)
        buf = self.buffer.pop(dest, None)
        if buf:
            for pkt in buf:
                self.forward_data(pkt)

    # -- discovery -------------------------------------------------------------

    def _rate_ok(self) -> bool:
        w = self._rreq_window
        horizon = self.engine.now - 1.0
        while w and w[0] <= horizon:
            w.popleft()
        return len(w) < self.params.rreq_ratelimit

    def originate_discovery(self, dest: int) -> Outcome:
        if dest in self.pending:
            return Outcome.ALREADY_PENDING
        d = self.pending[dest] = Discovery()
        if not self._rate_ok():
            self._defer(dest, d)
            return Outcome.RATE_LIMITED
        self._send_rreq(dest, d)
        return Outcome.SENT

    def _defer(self, dest: int, d: Discovery) -> None:
        self.counters.drops["rreq_rate_limited"] += 1
        d.timer = self.engine.at(self._rreq_window[0] + 1.0, self.id, TIMER_FIRE,
                                 self._deferred_send, dest, detail=f"rreq_defer dest={dest}")

    def _deferred_send(self, dest: int) -> None:
        d = self.pending.get(dest)
        if d is None:
            return
        if self._rate_ok():
            self._send_rreq(dest, d)
        else:
            self._defer(dest, d)

    def _send_rreq(self, dest: int, d: Discovery) -> None:
        now = self.engine.now
        self.seq += 1
        self.rreq_id += 1
        self._rreq_window.append(now)
        self.rreq_log.append(now)
        self.seen[(self.id, self.rreq_id)] = now + self.params.path_discovery_time
        self.counters.rreq_originated += 1
        e = self.routes.get(dest)
        rreq = RreqPacket(self.id, self.seq, self.rreq_id, dest,
                          e.dest_seq if e is not None else None, 0, self.params.net_diameter)
        self.channel.broadcast(self.id, rreq)
        wait = self.params.net_traversal_time * 2 ** d.retries
        d.timer = self.engine.after(wait, self.id, TIMER_FIRE, self._discovery_timeout, dest,
                                    detail=f"rreq_timeout dest={dest}")

    def _discovery_timeout(self, dest: int) -> None:
        d = self.pending.get(dest)
        if d is None:
            return
        if d.retries < self.params.rreq_retries:
            d.retries += 1
            if self._rate_ok():
                self._send_rreq(dest, d)
            else:
                self._defer(dest, d)
            return
        del self.pending[dest]
        buf = self.buffer.pop(dest, None)
        if buf:
            self.counters.drops["unreachable"] += len(buf)

    # -- handlers --------------------------------------------------------------

    def receive(self, pkt, prev_hop: int):
        self.neighbors[prev_hop] = self.engine.now
        kind = pkt.kind
        if kind == "RREQ":
            act = self.handle_rreq(pkt, prev_hop)
        elif kind == "DATA":
            act = self.forward_data(pkt, prev_hop)
        elif kind == "HELLO":
            act = self.handle_hello(pkt, prev_hop)
        elif kind == "RREP":
            act = self.handle_rrep(pkt, prev_hop)
        else:
            act = self.handle_rerr(pkt, prev_hop)
        if self.actions is not None:
            self.actions.append((self.engine.now, kind, act))
        return act

    def handle_rreq(self, rreq: RreqPacket, prev_hop: int) -> Action:
        now = self.engine.now
        if self.ndt is not None:
            verdict = self.ndt.gate_rreq(rreq.originator, prev_hop, now)
            if verdict.value != "pass":
                self.counters.drops[verdict.value] += 1
                return Action.DROP
        key = (rreq.originator, rreq.rreq_id)
        if key in self.seen:
            return Action.DROP
        p = self.params
        self.seen[key] = now + p.path_discovery_time
        self.update_route(prev_hop, prev_hop, 1, None, p.route_lifetime)
        self.update_route(rreq.originator, prev_hop, rreq.hop_count + 1, rreq.originator_seq,
                          p.route_lifetime)

        if rreq.dest == self.id:
            if rreq.dest_seq_known is not None and rreq.dest_seq_known > self.seq:
                self.seq = rreq.dest_seq_known
            self.counters.rrep_generated += 1
            self.channel.unicast(self.id, prev_hop,
                                 RrepPacket(self.id, self.seq, rreq.originator, 0, p.route_lifetime))
            return Action.REPLY

        r = self.route(rreq.dest)
        if (r is not None and r.dest_seq is not None
                and (rreq.dest_seq_known is None or r.dest_seq >= rreq.dest_seq_known)):
            r.precursors.add(prev_hop)
            self.counters.rrep_generated += 1
            self.channel.unicast(self.id, prev_hop,
                                 RrepPacket(rreq.dest, r.dest_seq, rreq.originator, r.hop_count,
                                            r.expires_at - now))
            return Action.REPLY

        if rreq.ttl <= 1:
            return Action.DROP
        self.channel.broadcast(self.id, RreqPacket(
            rreq.originator, rreq.originator_seq, rreq.rreq_id, rreq.dest,
            rreq.dest_seq_known, rreq.hop_count + 1, rreq.ttl - 1))
        return Action.REBROADCAST

    def handle_rrep(self, rrep: RrepPacket, prev_hop: int) -> Action:
        p = self.params
        self.update_route(prev_hop, prev_hop, 1, None, p.route_lifetime)
        if not self.update_route(rrep.dest, prev_hop, rrep.hop_count + 1, rrep.dest_seq,
                                 rrep.lifetime):
            self.counters.drops["stale_rrep"] += 1
            return Action.DROP
        if rrep.originator == self.id:
            return Action.CONSUME
        rev = self.route(rrep.originator)
        if rev is None:
            self.counters.drops["no_reverse_route"] += 1
            return Action.DROP
        self.routes[rrep.dest].precursors.add(rev.next_hop)
        rev.expires_at = max(rev.expires_at, self.engine.now + p.route_lifetime)
        self.channel.unicast(self.id, rev.next_hop, RrepPacket(
            rrep.dest, rrep.dest_seq, rrep.originator, rrep.hop_count + 1, rrep.lifetime))
        return Action.FORWARD

    def handle_rerr(self, rerr: RerrPacket, prev_hop: int) -> Action:
        affected, rediscover = [], []
        for dest, seq in rerr.unreachable:
            e = self.routes.get(dest)
            if e is None or not e.valid or e.next_hop != prev_hop:
                continue
            e.valid = False
            e.dest_seq = seq if e.dest_seq is None else max(e.dest_seq, seq)
            if e.precursors:
                affected.append((dest, e.dest_seq))
            if dest in self.buffer:
                rediscover.append(dest)
        if affected:
            self.channel.broadcast(self.id, RerrPacket(tuple(affected)))
        for dest in rediscover:
            self.originate_discovery(dest)
        return Action.FORWARD if affected else Action.DROP

    def handle_hello(self, hello: HelloPacket, prev_hop: int) -> Action:
        self.update_route(hello.originator, hello.originator, 1, hello.originator_seq,
                          self.params.neighbor_timeout)
        if self.ndt is not None and hello.alarm_payload:
            self.ndt.hat_incoming(hello.alarm_payload, hello.originator)
        return Action.CONSUME

    def forward_data(self, pkt: DataPacket, prev_hop: Optional[int] = None) -> Action:
        now = self.engine.now
        if pkt.dst == self.id:
            self.counters.delivered(pkt, now)
            return Action.DELIVER
        r = self.route(pkt.dst)
        if r is not None:
            life = now + self.params.route_lifetime
            if r.expires_at < life:
                r.expires_at = life
            if prev_hop is not None:
                r.precursors.add(prev_hop)
            self.channel.unicast(self.id, r.next_hop, pkt)
            return Action.FORWARD
        if pkt.src == self.id:
            self._buffer(pkt)
            self.originate_discovery(pkt.dst)
            return Action.BUFFER
        self.counters.drops["no_route"] += 1
        e = self.routes.get(pkt.dst)
        seq = e.dest_seq if e is not None and e.dest_seq is not None else 0
        self.channel.broadcast(self.id, RerrPacket(((pkt.dst, seq),)))
        return Action.DROP_NO_ROUTE

    def _buffer(self, pkt: DataPacket) -> None:
        buf = self.buffer.get(pkt.dst)
        if buf is None:
            buf = self.buffer[pkt.dst] = deque()
        if len(buf) >= self.params.buffer_cap:
            buf.popleft()
            self.counters.drops["buffer_overflow"] += 1
        buf.append(pkt)

    # -- maintenance -------------------------------------------------------------

    def handle_link_break(self, next_hop: int) -> None:
        self.neighbors.pop(next_hop, None)
        unreachable, rediscover = [], []
        for e in self.routes.values():
            if e.valid and e.next_hop == next_hop:
                e.valid = False
                if e.dest_seq is not None:
                    e.dest_seq += 1
                if e.precursors:
                    unreachable.append((e.dest, e.dest_seq or 0))
                if e.dest in self.buffer:
                    rediscover.append(e.dest)
        if unreachable:
            self.channel.broadcast(self.id, RerrPacket(tuple(unreachable)))
        for dest in rediscover:
            self.originate_discovery(dest)

    def link_failed(self, pkt, next_hop: int) -> None:
        """A unicast to ``next_hop`` found it out of range."""
        if pkt.kind == "DATA":
            if pkt.src == self.id:
                self._buffer(pkt)
            else:
                self.counters.drops["link_break"] += 1
        else:
            self.counters.drops["link_break_" + pkt.kind.lower()] += 1
        self.handle_link_break(next_hop)
        if pkt.kind == "DATA" and pkt.src == self.id and pkt.dst in self.buffer:
            if self.route(pkt.dst) is not None:
                self._route_ready(pkt.dst)
            else:
                self.originate_discovery(pkt.dst)

    def hello_tick(self) -> None:
        now = self.engine.now
        payload = tuple(self.ndt.hat_outgoing()) if self.ndt is not None else ()
        self.channel.broadcast(self.id, HelloPacket(self.id, self.seq, payload))
        limit = self.params.neighbor_timeout
        for nb, last in list(self.neighbors.items()):
            if now - last > limit:
                self.handle_link_break(nb)
        if len(self.seen) > 2048:
            self.seen = {k: v for k, v in self.seen.items() if v > now}
