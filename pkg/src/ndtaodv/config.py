"""Scenario configuration.

Defaults reproduce the experimental setup of the NDTAODV study: 25 nodes on a
1000 m x 1000 m terrain for 100 s, 5 CBR connections of 512-byte packets,
flood interval 0.009 s, cache interval 1 s, peak value 10.

Config files are flat ``key=value`` text; ``#`` starts a comment.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional

PROTOCOLS = ("aodv", "ndtaodv")
MAC_MODELS = ("csma", "ideal")


class ConfigInvalid(ValueError):
    """Raised with one diagnostic per offending field."""

    def __init__(self, problems: Mapping[str, str]):
        self.problems = dict(problems)
        super().__init__("; ".join(f"{k}: {v}" for k, v in self.problems.items()))


@dataclass(frozen=True)
class ScenarioConfig:
    protocol: str = "aodv"
    nodes: int = 25
    duration: float = 100.0
    width: float = 1000.0
    height: float = 1000.0
    connections: int = 5
    packet_size: int = 512
    pause_time: float = 0.0
    malicious: int = 0
    malicious_ids: Optional[tuple] = None
    seed: int = 1

    # mobility
    speed_min: float = 1.0
    speed_max: float = 20.0

    # traffic
    cbr_interval: float = 0.25
    flow_start_min: float = 1.0
    flow_start_max: float = 5.0
    flow_stop_margin: float = 1.0

    # channel
    range: float = 250.0
    per_hop_delay: float = 0.002
    loss_rate: float = 0.0
    mac: str = "csma"
    data_rate: float = 2e6
    basic_rate: float = 1e6
    ifq_len: int = 50

    # AODV
    hello_interval: float = 1.0
    allowed_hello_loss: int = 2
    route_lifetime: float = 10.0
    rreq_retries: int = 2
    rreq_ratelimit: int = 10
    net_diameter: int = 35
    node_traversal_time: float = 0.04
    buffer_cap: int = 64

    # NDT
    peak_value: int = 10
    cache_interval: float = 1.0
    entry_expiry: float = 1.0

    # attacker
    flood_interval: float = 0.009
    attack_start: float = 0.0
    attack_stop: Optional[float] = None
    void_pool_size: int = 64

    @property
    def ndt_enabled(self) -> bool:
        return self.protocol == "ndtaodv"

    @property
    def attack_stop_time(self) -> float:
        return self.duration if self.attack_stop is None else self.attack_stop

    @property
    def net_traversal_time(self) -> float:
        return 2 * self.node_traversal_time * self.net_diameter

    def malicious_nodes(self) -> tuple:
        """Attacker ids: explicit list if given, else the highest-numbered nodes."""
        if self.malicious_ids is not None:
            return tuple(sorted(self.malicious_ids))
        return tuple(range(self.nodes - self.malicious, self.nodes))

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def validate(self) -> "ScenarioConfig":
        p: dict[str, str] = {}
        if self.protocol not in PROTOCOLS:
            p["protocol"] = f"must be one of {PROTOCOLS}"
        if self.mac not in MAC_MODELS:
            p["mac"] = f"must be one of {MAC_MODELS}"
        if self.nodes < 1:
            p["nodes"] = "must be >= 1"
        if not self.duration > 0:
            p["duration"] = "must be > 0"
        if not (self.width > 0 and self.height > 0):
            p["terrain"] = "width and height must be > 0"
        if self.connections < 0:
            p["connections"] = "must be >= 0"
        if self.packet_size <= 0:
            p["packet_size"] = "must be > 0"
        if self.pause_time < 0:
            p["pause_time"] = "must be >= 0"
        if self.malicious_ids is not None:
            ids = self.malicious_ids
            if len(set(ids)) != len(ids) or any(not 0 <= i < self.nodes for i in ids):
                p["malicious_ids"] = "must be distinct ids in [0, nodes)"
            elif len(ids) != self.malicious:
                p["malicious_ids"] = "length must equal malicious"
        if not 0 <= self.malicious < self.nodes:
            p["malicious"] = "must satisfy 0 <= malicious < nodes"
        if not 0 < self.speed_min <= self.speed_max:
            p["speed_min"] = "need 0 < speed_min <= speed_max"
        if not self.cbr_interval > 0:
            p["cbr_interval"] = "must be > 0"
        if not 0 <= self.flow_start_min <= self.flow_start_max:
            p["flow_start_min"] = "need 0 <= flow_start_min <= flow_start_max"
        if not self.range > 0:
            p["range"] = "must be > 0"
        if self.per_hop_delay < 0:
            p["per_hop_delay"] = "must be >= 0"
        if not 0 <= self.loss_rate < 1:
            p["loss_rate"] = "must be in [0, 1)"
        if not (self.data_rate > 0 and self.basic_rate > 0):
            p["data_rate"] = "bit rates must be > 0"
        if self.ifq_len < 1:
            p["ifq_len"] = "must be >= 1"
        for name in ("hello_interval", "route_lifetime", "node_traversal_time",
                     "cache_interval", "entry_expiry", "flood_interval"):
            if not getattr(self, name) > 0:
                p[name] = "must be > 0"
        for name in ("allowed_hello_loss", "rreq_ratelimit", "net_diameter",
                     "buffer_cap", "peak_value", "void_pool_size"):
            if getattr(self, name) < 1:
                p[name] = "must be >= 1"
        if self.rreq_retries < 0:
            p["rreq_retries"] = "must be >= 0"
        if self.attack_start < 0 or self.attack_stop_time < self.attack_start:
            p["attack_start"] = "need 0 <= attack_start <= attack_stop"
        if p:
            raise ConfigInvalid(p)
        return self

    # -- (de)serialisation -------------------------------------------------

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: "ScenarioConfig | None" = None) -> "ScenarioConfig":
        base = base or cls()
        types = {f.name: f.type for f in fields(cls)}
        changes, problems = {}, {}
        for key, raw in values.items():
            key = key.strip().replace("-", "_")
            if key not in types:
                problems[key] = "unknown key"
                continue
            try:
                changes[key] = _coerce(types[key], raw)
            except (TypeError, ValueError) as e:
                problems[key] = f"bad value {raw!r} ({e})"
        if problems:
            raise ConfigInvalid(problems)
        return dataclasses.replace(base, **changes)

    @classmethod
    def from_file(cls, path: str | Path, base: "ScenarioConfig | None" = None) -> "ScenarioConfig":
        return cls.from_mapping(parse_kv(Path(path).read_text()), base)

    def to_kv(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, tuple):
                v = ",".join(map(str, v))
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid({f"line {lineno}": f"expected key=value, got {line!r}"})
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _coerce(typ: str, raw: Any):
    if not isinstance(raw, str):
        return raw
    s = raw.strip()
    if typ.startswith("Optional") and s.lower() in ("", "none"):
        return None
    if "tuple" in typ:
        return tuple(int(x) for x in s.split(",") if x.strip())
    if "int" in typ:
        return int(s)
    if "float" in typ:
        v = float(s)
        if math.isnan(v):
            raise ValueError("nan")
        return v
    return s.lower()
