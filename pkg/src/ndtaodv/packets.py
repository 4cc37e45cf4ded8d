"""Control and data packets.

Sizes are AODV message sizes in bytes (before IP/UDP and MAC headers, which
the channel adds when computing airtime).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(slots=True)
class RreqPacket:
    originator: int
    originator_seq: int
    rreq_id: int
    dest: int
    dest_seq_known: Optional[int]
    hop_count: int
    ttl: int

    control = True
    kind = "RREQ"
    size = 24

    def describe(self) -> str:
        return (f"RREQ orig={self.originator} id={self.rreq_id} dest={self.dest} "
                f"hops={self.hop_count} ttl={self.ttl}")


@dataclass(slots=True)
class RrepPacket:
    dest: int
    dest_seq: int
    originator: int
    hop_count: int
    lifetime: float

    control = True
    kind = "RREP"
    size = 20

    def describe(self) -> str:
        return f"RREP dest={self.dest} seq={self.dest_seq} orig={self.originator} hops={self.hop_count}"


@dataclass(slots=True)
class RerrPacket:
    unreachable: tuple  # ((dest, seq), ...)

    control = True
    kind = "RERR"

    def __post_init__(self):
        if not self.unreachable:
            raise ValueError("RERR needs at least one unreachable destination")

    @property
    def size(self) -> int:
        return 4 + 8 * len(self.unreachable)

    def describe(self) -> str:
        return "RERR " + ",".join(f"{d}:{s}" for d, s in self.unreachable)


@dataclass(slots=True)
class HelloPacket:
    originator: int
    originator_seq: int
    alarm_payload: tuple = ()

    control = True
    kind = "HELLO"

    @property
    def size(self) -> int:
        return 20 + 4 * len(self.alarm_payload)

    def describe(self) -> str:
        return f"HELLO orig={self.originator} seq={self.originator_seq} alarm=[{','.join(map(str, self.alarm_payload))}]"


@dataclass(slots=True)
class DataPacket:
    flow_id: int
    seq: int
    src: int
    dst: int
    size: int
    sent_at: float

    control = False
    kind = "DATA"

    def describe(self) -> str:
        return f"DATA flow={self.flow_id} seq={self.seq} {self.src}->{self.dst}"
