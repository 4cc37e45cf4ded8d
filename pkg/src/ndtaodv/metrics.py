"""Run counters and the three reported metrics (PDF, average throughput, NRL)."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional


class InvalidCounts(ValueError):
    pass


def compute_pdf(sent: int, delivered: int) -> Optional[float]:
    """Delivered / sent data packets; ``None`` when nothing was sent."""
    if delivered > sent or delivered < 0:
        raise InvalidCounts(f"delivered={delivered} exceeds sent={sent}")
    if sent == 0:
        return None
    return delivered / sent


def compute_at(delivered_bytes: int, duration: float) -> float:
    """Average throughput in kbit/s."""
    if not duration > 0:
        raise ValueError("duration must be > 0")
    return delivered_bytes * 8 / duration / 1000


def compute_nrl(routing_tx: int, delivered: int) -> float:
    """Routing transmissions per delivered data packet; ``inf`` if none delivered."""
    if delivered == 0:
        return math.inf
    return routing_tx / delivered


class BroodyEvent(NamedTuple):
    time: float
    detector: int
    detected: int
    via: str  # "peak" (inline check), "flush" (cache timer) or "hat" (hello alarm)


class Counters:
    """Mutable tallies filled in during a run."""

    def __init__(self, n_flows: int):
        self.data_sent = 0
        self.data_delivered = 0
        self.delivered_bytes = 0
        self.latency_sum = 0.0
        self.routing_tx = 0
        self.tx_by_kind: Counter = Counter()
        self.drops: Counter = Counter()
        self.flow_sent = [0] * n_flows
        self.flow_delivered = [0] * n_flows
        self.broody_events: list[BroodyEvent] = []
        self.rreq_originated = 0
        self.rrep_generated = 0

    def sent(self, pkt) -> None:
        self.data_sent += 1
        self.flow_sent[pkt.flow_id] += 1

    def delivered(self, pkt, now: float) -> None:
        self.data_delivered += 1
        self.delivered_bytes += pkt.size
        self.latency_sum += now - pkt.sent_at
        self.flow_delivered[pkt.flow_id] += 1


@dataclass(frozen=True)
class FlowReport:
    flow_id: int
    src: int
    dst: int
    sent: int
    delivered: int


@dataclass(frozen=True)
class MetricsReport:
    protocol: str
    pause_time: float
    malicious: int
    seed: int
    duration: float
    data_sent: int
    data_delivered: int
    delivered_bytes: int
    routing_tx: int
    pdf: Optional[float]
    avg_throughput: float
    nrl: float
    mean_latency: Optional[float]
    tx_by_kind: dict
    drops: dict
    flows: tuple
    broody_events: tuple
    broody_final: tuple
    events_processed: int
    trace_hash: Optional[str] = None

    @property
    def first_detection_time(self) -> Optional[float]:
        return min((e.time for e in self.broody_events), default=None)

    @property
    def broody_final_size(self) -> int:
        return len(self.broody_final)

    def to_json(self) -> str:
        d = asdict(self)
        d["nrl"] = "inf" if math.isinf(self.nrl) else self.nrl
        return json.dumps(d, sort_keys=True)

    @classmethod
    def build(cls, cfg, c: Counters, flows, broody_final, events_processed,
              trace_hash=None) -> "MetricsReport":
        return cls(
            protocol=cfg.protocol,
            pause_time=cfg.pause_time,
            malicious=cfg.malicious,
            seed=cfg.seed,
            duration=cfg.duration,
            data_sent=c.data_sent,
            data_delivered=c.data_delivered,
            delivered_bytes=c.delivered_bytes,
            routing_tx=c.routing_tx,
            pdf=compute_pdf(c.data_sent, c.data_delivered),
            avg_throughput=compute_at(c.delivered_bytes, cfg.duration),
            nrl=compute_nrl(c.routing_tx, c.data_delivered),
            mean_latency=(c.latency_sum / c.data_delivered) if c.data_delivered else None,
            tx_by_kind=dict(sorted(c.tx_by_kind.items())),
            drops=dict(sorted(c.drops.items())),
            flows=tuple(FlowReport(f.id, f.src, f.dst, c.flow_sent[f.id], c.flow_delivered[f.id])
                        for f in flows),
            broody_events=tuple(c.broody_events),
            broody_final=tuple(sorted(broody_final)),
            events_processed=events_processed,
            trace_hash=trace_hash,
        )
