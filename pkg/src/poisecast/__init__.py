"""Minimum-time dissemination schedules in the telephone and radio models."""

from .graphs import DemandSet, Graph, MultiGraph, NodeWeights
from .gossip import radio_gossip
from .models import (
    PossessionState,
    RadioSchedule,
    TelephoneSchedule,
    check_demands_met,
    simulate_radio,
    simulate_telephone,
)
from .multicast import planar_mc_multicast

__version__ = "0.1.0"

__all__ = [
    "DemandSet",
    "Graph",
    "MultiGraph",
    "NodeWeights",
    "PossessionState",
    "RadioSchedule",
    "TelephoneSchedule",
    "check_demands_met",
    "planar_mc_multicast",
    "radio_gossip",
    "simulate_radio",
    "simulate_telephone",
    "__version__",
]
