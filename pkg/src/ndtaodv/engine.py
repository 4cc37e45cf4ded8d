"""Deterministic discrete-event scheduler.

Events are ordered by ``(fire_at, insertion sequence)`` so that two runs fed
the same schedule calls dispatch in exactly the same order.
"""

from __future__ import annotations

import hashlib
import heapq
import itertools
from typing import Any, Callable, Optional, TextIO

PACKET_DELIVERY = "PacketDelivery"
TIMER_FIRE = "TimerFire"
MOBILITY_UPDATE = "MobilityUpdate"
TRAFFIC_TICK = "TrafficTick"

EVENT_KINDS = (PACKET_DELIVERY, TIMER_FIRE, MOBILITY_UPDATE, TRAFFIC_TICK)


class PastEvent(ValueError):
    """Raised when an event is scheduled before the current simulated time."""


class Event:
    """A single scheduled action.

    ``target`` is a node id, or a tuple of node ids for a fan-out event, in
    which case ``action(target_i, *args)`` runs once per target in order and
    each run counts (and is traced) as a separate dispatched event.

    ``action(*args)`` is invoked at dispatch. ``detail`` is a string or a
    ``(fn, *args)`` tuple formatted lazily, only when a trace is recorded.
    """

    __slots__ = ("fire_at", "target", "kind", "action", "args", "detail",
                 "cancelled", "fired", "seq")

    def __init__(self, fire_at: float, target: int, kind: str,
                 action: Callable[..., Any], args: tuple = (), detail: Any = ""):
        self.fire_at = fire_at
        self.target = target
        self.kind = kind
        self.action = action
        self.args = args
        self.detail = detail
        self.cancelled = False
        self.fired = False
        self.seq = -1

    def describe(self) -> str:
        d = self.detail
        if isinstance(d, tuple):
            return d[0](*d[1:])
        return str(d)

    def __repr__(self):
        return f"Event({self.fire_at!r}, node={self.target}, {self.kind})"


# An EventHandle is the scheduled Event itself; kept as an alias for clarity
# at call sites that only cancel.
EventHandle = Event


class Engine:
    """Owns simulated time and the pending-event heap."""

    def __init__(self, trace: Optional[TextIO] = None, hash_trace: bool = False):
        self.now = 0.0
        self._queue: list = []
        self._counter = itertools.count()
        self._trace = trace
        self._hasher = hashlib.sha256() if (hash_trace or trace is not None) else None
        self.processed = 0

    def schedule(self, ev: Event) -> EventHandle:
        if ev.fire_at < self.now:
            raise PastEvent(f"cannot schedule at t={ev.fire_at} (now={self.now})")
        ev.seq = next(self._counter)
        heapq.heappush(self._queue, (ev.fire_at, ev.seq, ev))
        return ev

    def at(self, fire_at: float, target: int, kind: str, action, *args,
           detail: Any = "") -> EventHandle:
        return self.schedule(Event(fire_at, target, kind, action, args, detail))

    def after(self, delay: float, target: int, kind: str, action, *args,
              detail: Any = "") -> EventHandle:
        return self.schedule(Event(self.now + delay, target, kind, action, args, detail))

    @staticmethod
    def cancel(h: EventHandle) -> bool:
        if h is None or h.fired or h.cancelled:
            return False
        h.cancelled = True
        return True

    def pending(self) -> int:
        return sum(1 for _, _, ev in self._queue if not ev.cancelled)

    def run_until(self, t_end: float) -> int:
        """Dispatch every event with ``fire_at <= t_end``; returns how many ran."""
        if t_end < self.now:
            raise PastEvent(f"run_until({t_end}) is before now={self.now}")
        q = self._queue
        pop = heapq.heappop
        hasher = self._trace is not None or self._hasher is not None
        n = 0
        while q and q[0][0] <= t_end:
            t, _, ev = pop(q)
            if ev.cancelled:
                continue
            self.now = t
            ev.fired = True
            tg = ev.target
            if tg.__class__ is tuple:
                # simultaneous fan-out: same order as one event per target
                for x in tg:
                    if hasher:
                        self._record(ev, x)
                    ev.action(x, *ev.args)
                n += len(tg)
            else:
                if hasher:
                    self._record(ev, tg)
                ev.action(*ev.args)
                n += 1
        self.now = t_end
        self.processed += n
        return n

    def _record(self, ev: Event, target) -> None:
        line = f"{ev.fire_at!r}\t{target}\t{ev.kind}\t{ev.describe()}\n"
        if self._hasher is not None:
            self._hasher.update(line.encode())
        if self._trace is not None:
            self._trace.write(line)

    @property
    def trace_hash(self) -> Optional[str]:
        return self._hasher.hexdigest() if self._hasher is not None else None
