"""Price-greedy charging schedule with full knowledge of prices and departures.

Pile limits only depend on how many EVs are docked, not on powers, so every session is planned on
its own. Its SoC envelope turns into a floor on the grid energy drawn by the end of each slot of
its stay. With the total fixed at the energy the session needs, each floor caps the energy drawn
after that slot. Filling the cheapest slots first, each as far as the pile limit and those caps
allow, gives the least energy cost of any charging-only schedule that meets every target within
the limits and envelopes the online policies face.
"""

import dataclasses
import logging
import math
import typing as tp

import numpy as np

from ..simenv import (
    EvSession,
    PenaltyConfig,
    SlotLedger,
    StationConfig,
    Traces,
    initial_state,
    per_pile_power_limit,
    soc_envelope,
    step,
)
from .metrics import MetricsReport, SessionOutcome, build_report, session_outcomes

logger = logging.getLogger(__name__)

SLOTS_PER_DAY = 24
ENERGY_TOLERANCE = 1e-9


@dataclasses.dataclass(eq=False)
class OracleResult:
    """`schedule[day]` is a `(24, n_piles)` array of kW, row k being slot k of that day."""

    schedule: tp.Dict[int, np.ndarray]
    report: MetricsReport
    ledgers: tp.List[SlotLedger]
    outcomes: tp.List[SessionOutcome]
    infeasible: tp.List[EvSession]


def required_energy_kwh(session: EvSession, cfg: StationConfig) -> float:
    """Grid energy that lifts the EV from its arrival SoC to the expected SoC."""
    return (session.soc_dep_expected - session.soc_arr) * session.capacity_kwh / cfg.charge_efficiency


def energy_floors(
    session: EvSession,
    limits_kw: tp.Mapping[int, float],
    cfg: StationConfig,
) -> tp.Dict[int, float]:
    """Least grid energy the session must have drawn by the end of each slot of its stay.

    A floor never exceeds what the slots so far can deliver at their limits. Past that point the
    station only accepts full power, which the floor then asks for.
    """
    required = required_energy_kwh(session, cfg)
    floors = {}
    deliverable = 0.0
    for t in range(session.t_arr, session.t_dep_actual):
        deliverable += limits_kw[t] * cfg.slot_hours
        soc_lb, _ = soc_envelope(session, t, limits_kw[t], cfg)
        needed = (soc_lb - session.soc_arr) * session.capacity_kwh / cfg.charge_efficiency
        floors[t] = min(max(needed, 0.0), deliverable, required)
    return floors


def plan_session(
    session: EvSession,
    limits_kw: tp.Mapping[int, float],
    traces: Traces,
    cfg: StationConfig,
) -> tp.Tuple[tp.Dict[int, float], bool]:
    """Grid power per slot of the session's stay, and whether its expected SoC is reached.

    `limits_kw[t]` is the pile limit during slot t. A session that can't be served within its stay
    charges at the limit throughout.
    """
    window = range(session.t_arr, session.t_dep_actual)
    required = required_energy_kwh(session, cfg)
    capacity = {t: limits_kw[t] * cfg.slot_hours for t in window}
    if math.fsum(capacity.values()) < required - ENERGY_TOLERANCE:
        return {t: limits_kw[t] for t in window}, False

    floors = energy_floors(session, limits_kw, cfg)
    energy = {t: 0.0 for t in window}
    remaining = required
    # Cheapest first, earliest among equal prices.
    for t in sorted(window, key=lambda t: (traces.price.at(t), t)):
        if remaining <= ENERGY_TOLERANCE:
            break
        room = min(capacity[t], remaining)
        for u in range(session.t_arr, t):
            drawn_after = math.fsum(energy[s] for s in window if s > u)
            room = min(room, required - floors[u] - drawn_after)
        room = max(room, 0.0)
        energy[t] = room
        remaining -= room
    return {t: e / cfg.slot_hours for t, e in energy.items()}, remaining <= ENERGY_TOLERANCE


def _day_schedule(
    sessions: tp.Sequence[EvSession],
    day_start: int,
    traces: Traces,
    cfg: StationConfig,
) -> tp.Tuple[np.ndarray, tp.List[EvSession]]:
    schedule = np.zeros((SLOTS_PER_DAY, cfg.n_piles))
    slots = range(day_start, day_start + SLOTS_PER_DAY)
    n_docked = {t: sum(1 for s in sessions if s.t_arr <= t < s.t_dep_actual) for t in slots}

    infeasible = []
    for pile, session in enumerate(sessions):
        limits = {
            t: per_pile_power_limit(cfg.p_station_max_kw, n_docked[t])
            for t in range(session.t_arr, session.t_dep_actual)
        }
        powers, reached = plan_session(session, limits, traces, cfg)
        for t, power in powers.items():
            schedule[t - day_start, pile] = power
        if not reached:
            infeasible.append(session)
    return schedule, infeasible


def greedy_oracle(
    sessions: tp.Mapping[int, tp.Sequence[EvSession]],
    traces: Traces,
    station_cfg: StationConfig,
    penalty_cfg: PenaltyConfig,
) -> OracleResult:
    """Schedule every day's sessions greedily and replay the schedule through the station.

    Sessions that can't receive their energy within their stay are charged as much as possible
    and reported in `infeasible`.
    """
    schedule: tp.Dict[int, np.ndarray] = {}
    ledgers: tp.List[SlotLedger] = []
    infeasible: tp.List[EvSession] = []
    for day, day_sessions in sessions.items():
        start = traces.day_start(day)
        day_plan, day_infeasible = _day_schedule(day_sessions, start, traces, station_cfg)
        schedule[day] = day_plan
        infeasible.extend(day_infeasible)

        state = initial_state(traces, station_cfg, start, day_sessions)
        for k in range(SLOTS_PER_DAY):
            state, ledger = step(state, day_plan[k], traces, station_cfg)
            ledgers.append(ledger)

    if infeasible:
        logger.warning("%d sessions can't reach their expected SoC.", len(infeasible))
    outcomes = session_outcomes(ledgers)
    report = build_report(ledgers, outcomes, penalty_cfg, infeasible_sessions=len(infeasible))
    logger.info(
        "Oracle energy cost %.4f over %d sessions.",
        report.energy_cost_usd,
        report.n_sessions,
    )
    return OracleResult(
        schedule=schedule,
        report=report,
        ledgers=ledgers,
        outcomes=outcomes,
        infeasible=infeasible,
    )


def schedule_energy_cost(schedule: np.ndarray, day_start: int, traces: Traces, cfg: StationConfig) -> float:
    """EV-only energy cost of one day's schedule."""
    return math.fsum(
        traces.price.at(day_start + k) * float(schedule[k].sum()) * cfg.slot_hours
        for k in range(schedule.shape[0])
    )
