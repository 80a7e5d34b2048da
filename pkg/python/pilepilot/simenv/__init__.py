"""Charging station world: EV sessions, pile physics, the demand charge and the slot transition."""

from .penalty import excess_load_kw, penalty_cost
from .physics import (
    SocUpdate,
    apply_power,
    per_pile_power_limit,
    power_boundaries,
    soc_envelope,
    station_boundaries,
)
from .sessions import SCENARIOS, Scenario, SessionDistribution, sample_ev_sessions
from .station import Station, initial_state, step
from .types import (
    Departure,
    EvSession,
    PenaltyConfig,
    PileState,
    SlotLedger,
    StationConfig,
    StationState,
    TimeSlot,
    Trace,
    Traces,
    day_start_index,
)

__all__ = [
    "SCENARIOS",
    "Departure",
    "EvSession",
    "PenaltyConfig",
    "PileState",
    "Scenario",
    "SessionDistribution",
    "SlotLedger",
    "SocUpdate",
    "Station",
    "StationConfig",
    "StationState",
    "TimeSlot",
    "Trace",
    "Traces",
    "apply_power",
    "day_start_index",
    "excess_load_kw",
    "initial_state",
    "penalty_cost",
    "per_pile_power_limit",
    "power_boundaries",
    "sample_ev_sessions",
    "soc_envelope",
    "station_boundaries",
    "step",
]
