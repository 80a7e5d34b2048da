"""The per-slot transition of the charging station."""

import dataclasses
import math
import typing as tp

from ..errors import BoundaryViolation, DomainError, ShapeError
from .physics import apply_power, station_boundaries
from .types import (
    Departure,
    EvSession,
    PileState,
    SlotLedger,
    StationConfig,
    StationState,
    Traces,
)

BOUND_TOLERANCE = 1e-9


def _dock_arrivals(
    piles: tp.List[PileState],
    upcoming: tp.List[tp.Optional[EvSession]],
    index: int,
) -> None:
    for i, session in enumerate(upcoming):
        if session is not None and session.t_arr <= index and not piles[i].docked:
            piles[i] = PileState(pile_id=i, session=session, soc_now=session.soc_arr)
            upcoming[i] = None


def initial_state(
    traces: Traces,
    cfg: StationConfig,
    start: int,
    sessions: tp.Sequence[EvSession],
) -> StationState:
    """Empty station at slot `start`, with `sessions[i]` scheduled for pile i."""
    if len(sessions) > cfg.n_piles:
        raise DomainError("{} sessions for {} piles.".format(len(sessions), cfg.n_piles))
    piles = [PileState(pile_id=i) for i in range(cfg.n_piles)]
    upcoming: tp.List[tp.Optional[EvSession]] = list(sessions)
    upcoming += [None] * (cfg.n_piles - len(upcoming))
    _dock_arrivals(piles, upcoming, start)
    return StationState(
        slot=traces.slot(start),
        piles=tuple(piles),
        building_load_kw=traces.load.at(start),
        price=traces.price.at(start),
        upcoming=tuple(upcoming),
    )


def step(
    state: StationState,
    powers: tp.Sequence[float],
    traces: Traces,
    cfg: StationConfig,
) -> tp.Tuple[StationState, SlotLedger]:
    """Apply one slot of pile powers and advance to the next slot.

    Raises:
        ShapeError: `powers` doesn't have one entry per pile.
        DomainError: `state` lies past the final reading of the traces.
        BoundaryViolation: a power lies outside its pile's boundaries (or is non-zero on an
            empty pile).
    """
    if state.slot.index >= len(traces.load):
        raise DomainError("Slot {} lies past the end of the traces.".format(state.slot.index))
    if len(powers) != len(state.piles):
        raise ShapeError("Expected {} pile powers, got {}.".format(len(state.piles), len(powers)))
    powers = tuple(float(p) for p in powers)

    bounds = station_boundaries(state, cfg)
    for pile, power, (p_min, p_max) in zip(state.piles, powers, bounds):
        if not pile.docked:
            if abs(power) > BOUND_TOLERANCE:
                raise BoundaryViolation(pile.pile_id, power, 0.0, 0.0)
        elif not p_min - BOUND_TOLERANCE <= power <= p_max + BOUND_TOLERANCE:
            raise BoundaryViolation(pile.pile_id, power, p_min, p_max)

    soc_start = tuple(pile.soc_now for pile in state.piles)
    soc_end: tp.List[tp.Optional[float]] = []
    piles: tp.List[PileState] = []
    faults = 0
    for pile, power in zip(state.piles, powers):
        if pile.docked:
            update = apply_power(pile, power, cfg)
            faults += update.clamped
            soc_end.append(update.soc)
            piles.append(dataclasses.replace(pile, soc_now=update.soc))
        else:
            soc_end.append(None)
            piles.append(pile)

    total_load = state.building_load_kw + math.fsum(powers)
    # Exported power earns nothing.
    energy_cost = state.price * max(0.0, total_load) * cfg.slot_hours

    next_index = state.slot.index + 1
    departures = []
    for i, pile in enumerate(piles):
        if pile.session is not None and pile.session.t_dep_actual <= next_index:
            departures.append(Departure(i, pile.session, tp.cast(float, pile.soc_now)))
            piles[i] = PileState(pile_id=i)

    upcoming = list(state.upcoming)
    _dock_arrivals(piles, upcoming, next_index)

    if next_index < len(traces.load):
        load_next, price_next = traces.load.at(next_index), traces.price.at(next_index)
    else:
        # After the final reading only the closing observation is built, nothing steps from it.
        load_next, price_next = state.building_load_kw, state.price

    next_state = StationState(
        slot=traces.slot(next_index),
        piles=tuple(piles),
        building_load_kw=load_next,
        price=price_next,
        peak_load_kw=max(state.peak_load_kw, total_load),
        cumulative_energy_cost=state.cumulative_energy_cost + energy_cost,
        upcoming=tuple(upcoming),
    )
    ledger = SlotLedger(
        slot=state.slot.index,
        building_load_kw=state.building_load_kw,
        price=state.price,
        total_load_kw=total_load,
        energy_cost=energy_cost,
        powers=powers,
        soc_start=soc_start,
        soc_end=tuple(soc_end),
        departures=tuple(departures),
        clamp_faults=faults,
    )
    return next_state, ledger


class Station:
    """A station bound to its traces and configuration."""

    def __init__(self, cfg: StationConfig, traces: Traces):
        self.cfg = cfg
        self.traces = traces

    def reset(self, day: int, sessions: tp.Sequence[EvSession]) -> StationState:
        if not 0 <= day < self.traces.n_days:
            raise DomainError(
                "Day {} outside the {} whole days of the traces.".format(day, self.traces.n_days)
            )
        return initial_state(self.traces, self.cfg, self.traces.day_start(day), sessions)

    def day_slots(self, day: int) -> range:
        start = self.traces.day_start(day)
        return range(start, start + 24)

    def boundaries(self, state: StationState) -> tp.List[tp.Tuple[float, float]]:
        return station_boundaries(state, self.cfg)

    def step(
        self, state: StationState, powers: tp.Sequence[float]
    ) -> tp.Tuple[StationState, SlotLedger]:
        return step(state, powers, self.traces, self.cfg)

