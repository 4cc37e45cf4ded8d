"""Wiring of one scenario: engine, mobility, channel, nodes, traffic, attackers."""

from __future__ import annotations

import math
from typing import Optional, Sequence, TextIO

from .adversary import AttackerParams, FloodAttacker
from .aodv import AodvNode, AodvParams
from .channel import Channel, ChannelParams
from .config import ScenarioConfig
from .engine import MOBILITY_UPDATE, TIMER_FIRE, Engine
from .metrics import BroodyEvent, Counters, MetricsReport
from .mobility import Mobility
from .ndt import NdtParams, NdtState
from .rng import stream
from .traffic import CbrSource, Flow, setup_flows


class Simulation:
    """A self-contained scenario; call :meth:`run` once.

    ``mobility`` and ``flows`` override the random waypoint model and the
    random flow selection (used for scripted topologies).
    """

    def __init__(self, config: ScenarioConfig, *, mobility: Optional[Mobility] = None,
                 flows: Optional[Sequence[Flow]] = None, trace: Optional[TextIO] = None,
                 hash_trace: bool = False):
        cfg = self.config = config.validate()
        self.engine = Engine(trace=trace, hash_trace=hash_trace)
        if mobility is None:
            mobility = Mobility.random_waypoint(cfg.nodes, cfg.width, cfg.height, cfg.duration,
                                                cfg.pause_time, cfg.speed_min, cfg.speed_max,
                                                cfg.seed)
        if mobility.n != cfg.nodes:
            raise ValueError(f"mobility has {mobility.n} nodes, config says {cfg.nodes}")
        self.mobility = mobility
        self.flows = list(setup_flows(cfg, stream(cfg.seed, "traffic")) if flows is None else flows)
        self.counters = Counters(len(self.flows))
        self.channel = Channel(self.engine, mobility, ChannelParams.from_config(cfg),
                               self.counters, stream(cfg.seed, "channel"),
                               self._receive, self._link_failed)
        self.malicious = set(cfg.malicious_nodes())
        aodv_params = AodvParams.from_config(cfg)
        ndt_params = NdtParams.from_config(cfg)
        self.nodes: list[AodvNode] = []
        for i in range(cfg.nodes):
            ndt = None
            if cfg.ndt_enabled and i not in self.malicious:
                ndt = NdtState(i, ndt_params, self._blacklist_logger(i))
            self.nodes.append(AodvNode(i, self.engine, self.channel, aodv_params,
                                       self.counters, ndt=ndt, malicious=i in self.malicious))
        self.sources = [CbrSource(f, self.nodes[f.src], self.counters) for f in self.flows]
        attacker_params = AttackerParams.from_config(cfg)
        self.attackers = [FloodAttacker(self.nodes[i], attacker_params)
                          for i in sorted(self.malicious)]
        self._ran = False

    # -- callbacks -------------------------------------------------------------

    def _receive(self, node: int, pkt, prev_hop: int) -> None:
        self.nodes[node].receive(pkt, prev_hop)

    def _link_failed(self, node: int, pkt, next_hop: int) -> None:
        self.nodes[node].link_failed(pkt, next_hop)

    def _blacklist_logger(self, detector: int):
        def log(detected: int, via: str) -> None:
            self.counters.broody_events.append(
                BroodyEvent(self.engine.now, detector, detected, via))
        return log

    def _hello(self, node: int) -> None:
        self.nodes[node].hello_tick()
        self.engine.after(self.config.hello_interval, node, TIMER_FIRE, self._hello, node,
                          detail="hello")

    def _flush(self, node: int) -> None:
        self.nodes[node].ndt.cache_flush(self.engine.now)
        self.engine.after(self.config.cache_interval, node, TIMER_FIRE, self._flush, node,
                          detail="cache_flush")

    def _move(self, node: int) -> None:
        end = self.mobility.advance(node, self.engine.now)
        if end <= self.config.duration:
            self.engine.at(end, node, MOBILITY_UPDATE, self._move, node)

    # -- run -------------------------------------------------------------------

    def _start(self) -> None:
        cfg = self.config
        jitter = stream(cfg.seed, "hello").uniform(0, cfg.hello_interval, cfg.nodes)
        for i, node in enumerate(self.nodes):
            self.engine.at(float(jitter[i]), i, TIMER_FIRE, self._hello, i, detail="hello")
            if node.ndt is not None:
                self.engine.at(cfg.cache_interval, i, TIMER_FIRE, self._flush, i,
                               detail="cache_flush")
            end = self.mobility.next_change(i)
            if end <= cfg.duration:
                self.engine.at(end, i, MOBILITY_UPDATE, self._move, i)
        for src in self.sources:
            src.start()
        for atk in self.attackers:
            atk.start()

    def run(self) -> MetricsReport:
        if self._ran:
            raise RuntimeError("a Simulation can only be run once")
        self._ran = True
        self._start()
        self.engine.run_until(self.config.duration)
        return self.report()

    def broody_union(self) -> set:
        out = set()
        for node in self.nodes:
            if node.ndt is not None:
                out |= node.ndt.broody
        return out

    def report(self) -> MetricsReport:
        return MetricsReport.build(self.config, self.counters, self.flows, self.broody_union(),
                                   self.engine.processed, self.engine.trace_hash)


def run_scenario(config: ScenarioConfig, **kwargs) -> MetricsReport:
    return Simulation(config, **kwargs).run()
