"""Random Waypoint mobility over a rectangular terrain.

Every node's full itinerary is drawn up front from its own random stream.
Positions are computed on demand by interpolating along the leg that covers
the query time, so there is no fixed-step drift.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .rng import stream


class UnknownNode(KeyError):
    pass


class Position(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class WaypointLeg:
    """Travel from ``start`` to ``dest`` at ``speed``, then dwell for ``pause``."""

    start: Position
    dest: Position
    speed: float
    depart_at: float
    pause: float

    @property
    def travel_time(self) -> float:
        return math.dist(self.start, self.dest) / self.speed

    @property
    def arrive_at(self) -> float:
        return self.depart_at + self.travel_time

    @property
    def ends_at(self) -> float:
        return self.arrive_at + self.pause

    def position(self, t: float) -> Position:
        if t >= self.arrive_at:
            return self.dest
        frac = max(0.0, t - self.depart_at) / self.travel_time
        return Position(self.start.x + (self.dest.x - self.start.x) * frac,
                        self.start.y + (self.dest.y - self.start.y) * frac)


class Mobility:
    """Per-node leg schedules plus a vectorised view of the current legs."""

    def __init__(self, legs: Sequence[Sequence[WaypointLeg]], width: float, height: float):
        if not legs or any(len(l) == 0 for l in legs):
            raise ValueError("every node needs at least one leg")
        self.width = float(width)
        self.height = float(height)
        self.legs = [list(l) for l in legs]
        self._departs = [[leg.depart_at for leg in l] for l in self.legs]
        n = len(self.legs)
        self.v_max = max(leg.speed for l in self.legs for leg in l)
        self._idx = [0] * n
        self._start = np.zeros((n, 2))
        self._vel = np.zeros((n, 2))
        self._depart = np.zeros(n)
        self._dur = np.zeros(n)
        self._end = np.zeros(n)
        self._cur: list = [None] * n  # (sx, sy, vx, vy, depart, dur, end) per node
        for i in range(n):
            self._load(i, 0)

    @property
    def n(self) -> int:
        return len(self.legs)

    @classmethod
    def random_waypoint(cls, nodes: int, width: float, height: float, duration: float,
                        pause_time: float, speed_min: float, speed_max: float,
                        seed: int) -> "Mobility":
        legs = []
        for node in range(nodes):
            rng = stream(seed, "mobility", node)
            pos = Position(float(rng.uniform(0, width)), float(rng.uniform(0, height)))
            t = 0.0
            node_legs = []
            while True:
                dest = Position(float(rng.uniform(0, width)), float(rng.uniform(0, height)))
                speed = float(rng.uniform(speed_min, speed_max)) if speed_max > speed_min else float(speed_min)
                leg = WaypointLeg(pos, dest, speed, t, float(pause_time))
                node_legs.append(leg)
                t = leg.ends_at
                pos = dest
                if t > duration:
                    break
            legs.append(node_legs)
        return cls(legs, width, height)

    @classmethod
    def static(cls, positions: Sequence[tuple[float, float]], width: float = 1000.0,
               height: float = 1000.0) -> "Mobility":
        legs = [[WaypointLeg(Position(*p), Position(*p), 1.0, 0.0, math.inf)] for p in positions]
        return cls(legs, width, height)

    def _load(self, node: int, i: int) -> None:
        leg = self.legs[node][i]
        self._idx[node] = i
        tt = leg.travel_time
        self._start[node] = leg.start
        self._depart[node] = leg.depart_at
        self._dur[node] = tt
        self._end[node] = leg.ends_at
        if tt > 0:
            vel = ((leg.dest.x - leg.start.x) / tt, (leg.dest.y - leg.start.y) / tt)
        else:
            vel = (0.0, 0.0)
        self._vel[node] = vel
        self._cur[node] = (leg.start.x, leg.start.y, vel[0], vel[1], leg.depart_at, tt, leg.ends_at)

    def next_change(self, node: int) -> float:
        """Time at which ``node`` leaves its current leg (inf if never)."""
        return self._cur[node][6]

    def advance(self, node: int, t: float) -> float:
        """Move ``node`` onto the leg covering time ``t``; returns that leg's end."""
        legs = self.legs[node]
        i = self._idx[node]
        while legs[i].ends_at <= t and i + 1 < len(legs):
            i += 1
        if i != self._idx[node]:
            self._load(node, i)
        if legs[i].ends_at <= t:
            # itinerary exhausted: park at the final waypoint
            self._end[node] = math.inf
            self._cur[node] = self._cur[node][:6] + (math.inf,)
        return self._cur[node][6]

    def positions(self, t: float) -> np.ndarray:
        """(n, 2) array of all node positions at ``t``; ``t`` must not go backwards."""
        if (self._end < t).any():
            for node in np.nonzero(self._end < t)[0]:
                self.advance(int(node), t)
        el = np.clip(t - self._depart, 0.0, self._dur)
        return self._start + self._vel * el[:, None]

    def xy(self, node: int, t: float) -> tuple[float, float]:
        """Scalar fast path of :meth:`positions` for one node."""
        c = self._cur[node]
        if c[6] < t:
            self.advance(node, t)
            c = self._cur[node]
        el = t - c[4]
        if el < 0.0:
            el = 0.0
        elif el > c[5]:
            el = c[5]
        return c[0] + c[2] * el, c[1] + c[3] * el

    def position_at(self, node: int, t: float) -> Position:
        if not 0 <= node < len(self.legs):
            raise UnknownNode(node)
        i = bisect.bisect_right(self._departs[node], t) - 1
        return self.legs[node][max(i, 0)].position(t)
