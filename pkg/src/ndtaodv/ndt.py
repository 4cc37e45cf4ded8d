"""Neighbor Defense Technique.

Each defending node counts the route requests its direct neighbors originate
during the current cache interval. A neighbor whose count goes above the peak
value is put on the node's broody list, after which every RREQ originated by
it is dropped on arrival. Broody lists ride on HELLO beacons (the hello alarm)
so the rest of the network learns about the attacker without having to see
the flood itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Optional


class Verdict(enum.Enum):
    PASS_TO_AODV = "pass"
    DROP_BROODY = "drop_broody"
    DROP_PEAK_EXCEEDED = "drop_peak"


@dataclass(frozen=True)
class NdtParams:
    peak_value: int = 10
    cache_interval: float = 1.0
    entry_expiry: float = 1.0

    def __post_init__(self):
        if self.peak_value < 1 or not self.cache_interval > 0 or not self.entry_expiry > 0:
            raise ValueError("NDT parameters must be positive")

    @classmethod
    def from_config(cls, cfg) -> "NdtParams":
        return cls(cfg.peak_value, cfg.cache_interval, cfg.entry_expiry)


class RreqCountEntry:
    __slots__ = ("requester", "count", "expires_at")

    def __init__(self, requester: int, count: int, expires_at: float):
        self.requester = requester
        self.count = count
        self.expires_at = expires_at

    def __repr__(self):
        return f"RreqCountEntry({self.requester}, count={self.count}, expires_at={self.expires_at})"


class NdtState:
    """Per-node RREQ_count table and broody list.

    ``on_blacklist(detected, via)`` is called once for every id that enters
    the broody list.
    """

    def __init__(self, owner: int, params: NdtParams = NdtParams(),
                 on_blacklist: Optional[Callable[[int, str], None]] = None):
        self.owner = owner
        self.params = params
        self.counts: dict[int, RreqCountEntry] = {}
        self.broody: set[int] = set()
        self._on_blacklist = on_blacklist

    def _blacklist(self, node: int, via: str) -> bool:
        if node == self.owner or node in self.broody:
            return False
        self.broody.add(node)
        if self._on_blacklist is not None:
            self._on_blacklist(node, via)
        return True

    def gate_rreq(self, originator: int, prev_hop: int, now: float) -> Verdict:
        """Screen one received RREQ before AODV processing.

        Only requests heard directly from their originator are counted, so a
        neighbor's request relayed back by other nodes is never counted twice.
        """
        if originator in self.broody:
            return Verdict.DROP_BROODY
        if originator != prev_hop:
            return Verdict.PASS_TO_AODV
        e = self.counts.get(originator)
        if e is None or e.expires_at <= now:
            e = self.counts[originator] = RreqCountEntry(
                originator, 0, now + self.params.entry_expiry)
        e.count += 1
        if e.count > self.params.peak_value:
            self._blacklist(originator, "peak")
            return Verdict.DROP_PEAK_EXCEEDED
        return Verdict.PASS_TO_AODV

    def cache_flush(self, now: float) -> set[int]:
        newly = set()
        peak = self.params.peak_value
        for e in self.counts.values():
            if e.count > peak and self._blacklist(e.requester, "flush"):
                newly.add(e.requester)
        self.counts.clear()
        return newly

    def hat_outgoing(self) -> list[int]:
        return sorted(self.broody)

    def hat_incoming(self, payload: Iterable[int], sender: int) -> set[int]:
        if sender in self.broody:
            return set()
        added = set()
        for node in payload:
            if self._blacklist(node, "hat"):
                added.add(node)
        return added
