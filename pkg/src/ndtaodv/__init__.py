"""Discrete-event MANET simulator for AODV under RREQ flooding, with the
Neighbor Defense Technique (per-neighbor RREQ counting, broody list, hello
alarm) as the countermeasure."""

from .aodv import Action, AodvNode, AodvParams, Outcome, RouteEntry
from .channel import Channel, ChannelParams, DeliveryOutcome
from .config import ConfigInvalid, ScenarioConfig
from .engine import Engine, Event, PastEvent
from .metrics import MetricsReport, compute_at, compute_nrl, compute_pdf
from .mobility import Mobility, Position, WaypointLeg
from .ndt import NdtParams, NdtState, Verdict
from .simulation import Simulation, run_scenario
from .sweep import SweepRow, pivot, read_csv, sweep, write_csv
from .traffic import Flow, InsufficientNodes, setup_flows

__all__ = [
    "Action", "AodvNode", "AodvParams", "Outcome", "RouteEntry",
    "Channel", "ChannelParams", "DeliveryOutcome",
    "ConfigInvalid", "ScenarioConfig",
    "Engine", "Event", "PastEvent",
    "MetricsReport", "compute_at", "compute_nrl", "compute_pdf",
    "Mobility", "Position", "WaypointLeg",
    "NdtParams", "NdtState", "Verdict",
    "Simulation", "run_scenario",
    "SweepRow", "pivot", "read_csv", "sweep", "write_csv",
    "Flow", "InsufficientNodes", "setup_flows",
]

__version__ = "0.1.0"
