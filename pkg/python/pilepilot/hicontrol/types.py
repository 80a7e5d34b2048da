"""Observations of the high-level agent and the feature scaling shared by both tiers."""

import dataclasses
import math
import typing as tp

import numpy as np

from ..errors import DomainError
from ..simenv import PenaltyConfig, SlotLedger, StationConfig, StationState, Traces

if tp.TYPE_CHECKING:
    from ..locontrol.types import LowState

HIGH_STATE_DIM = 8
LOW_STATE_DIM = 6
PRICE_WINDOW_HOURS = 3


@dataclasses.dataclass(frozen=True)
class HighState:
    price_now: float
    price_avg_past_n: float
    price_historical: float
    load_now: float
    ev_count: int
    ev_energy_delivered_kw: float
    low_critic_mean: float
    low_critic_std: float

    def __post_init__(self):
        if self.ev_count < 0:
            raise DomainError("ev_count must be non-negative, got {}.".format(self.ev_count))
        if self.low_critic_std < 0:
            raise DomainError("low_critic_std must be non-negative.")
        values = dataclasses.astuple(self)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("HighState holds a non-finite value: {}.".format(values))


@dataclasses.dataclass(frozen=True)
class HighTransition:
    s_h: HighState
    a_h: float
    r_h: float
    s_h_next: HighState
    terminal: bool

    def __post_init__(self):
        if not 0.0 <= self.a_h <= 1.0:
            raise DomainError("Stored a_h must lie in [0, 1], got {}.".format(self.a_h))


@dataclasses.dataclass(frozen=True)
class StateScaler:
    """Maps raw observations to O(1) network features.

    Loads are divided by the contract capacity, prices by a reference price, EV powers by the
    station capacity and EV counts by the number of piles.
    """

    contract_kw: float
    price_ref: float
    n_piles: int
    p_station_max_kw: float

    @classmethod
    def for_station(
        cls, station: StationConfig, penalty: PenaltyConfig, traces: Traces
    ) -> "StateScaler":
        price_ref = float(np.mean(traces.price.values)) if len(traces.price) else 1.0
        return cls(
            contract_kw=penalty.contract_kw,
            price_ref=price_ref if price_ref > 0 else 1.0,
            n_piles=station.n_piles,
            p_station_max_kw=station.p_station_max_kw,
        )

    def high(self, s: HighState) -> np.ndarray:
        return np.array(
            [
                s.price_now / self.price_ref,
                s.price_avg_past_n / self.price_ref,
                s.price_historical / self.price_ref,
                s.load_now / self.contract_kw,
                s.ev_count / self.n_piles,
                s.ev_energy_delivered_kw / self.p_station_max_kw,
                s.low_critic_mean,
                s.low_critic_std,
            ]
        )

    def high_batch(self, states: tp.Sequence[HighState]) -> np.ndarray:
        return np.stack([self.high(s) for s in states]) if states else np.zeros((0, HIGH_STATE_DIM))

    def low(self, s: "LowState") -> np.ndarray:
        return np.array(
            [
                s.soc_now,
                s.p_max_kw / self.p_station_max_kw,
                s.p_min_kw / self.p_station_max_kw,
                float(s.high_action_disc),
                s.high_critic_value,
                1.0 if s.docked else 0.0,
            ]
        )


def build_high_state(
    state: StationState,
    history: tp.Sequence[SlotLedger],
    traces: Traces,
    low_critic_values: tp.Sequence[float],
    n_hours: int = PRICE_WINDOW_HOURS,
) -> HighState:
    """Observation of the high-level agent at the start of `state`'s slot.

    `history` is the ledger of the episode so far and `low_critic_values` the docked low-level
    agents' critic values from the previous slot. Without history the delivered EV power and the
    critic statistics are zero.
    """
    t = state.slot.index
    price_now = state.price

    past = traces.price.window(t - n_hours, t)
    price_avg = float(np.mean(past)) if len(past) else price_now

    if t - 168 >= 0:
        price_hist = traces.price[t - 168]
    elif t - 24 >= 0:
        price_hist = traces.price[t - 24]
    else:
        price_hist = price_now

    values = np.asarray(low_critic_values, dtype=np.float64)
    if values.size:
        critic_mean, critic_std = float(values.mean()), float(values.std())
    else:
        critic_mean, critic_std = 0.0, 0.0

    return HighState(
        price_now=price_now,
        price_avg_past_n=price_avg,
        price_historical=price_hist,
        load_now=state.building_load_kw,
        ev_count=state.n_docked,
        ev_energy_delivered_kw=history[-1].ev_power_kw if history else 0.0,
        low_critic_mean=critic_mean,
        low_critic_std=critic_std,
    )
