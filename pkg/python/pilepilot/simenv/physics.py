"""Pile power limits, SoC envelopes and the SoC update."""

import logging
import typing as tp

from ..errors import DomainEmpty, DomainError
from .types import EvSession, PileState, StationConfig, StationState, TimeSlot, slot_index

logger = logging.getLogger(__name__)

CLAMP_TOLERANCE = 1e-9


class SocUpdate(tp.NamedTuple):
    soc: float
    clamped: bool


def per_pile_power_limit(p_station_max_kw: float, n_docked: int) -> float:
    """Share the station capacity equally between the docked EVs.

    The discharge limit is the negation of the returned value.

    Raises:
        DomainEmpty: no EV is docked, the limit isn't defined.
    """
    if n_docked < 1:
        raise DomainEmpty("No pile limit is defined without docked EVs.")
    return p_station_max_kw / n_docked


def soc_envelope(
    session: EvSession,
    slot: tp.Union[int, TimeSlot],
    p_pile_kw: float,
    cfg: StationConfig,
) -> tp.Tuple[float, float]:
    """Lowest and highest SoC the EV may hold at the end of `slot`.

    The lower bound is the lowest SoC from which the expected SoC is still reachable at full pile
    power over the slots left before the planned departure.
    """
    t = slot_index(slot)
    if not session.t_arr <= t < session.t_dep_planned:
        raise DomainError(
            "Slot {} outside the session window [{}, {}).".format(
                t, session.t_arr, session.t_dep_planned
            )
        )
    remaining = session.t_dep_planned - t - 1
    reachable = (
        remaining * p_pile_kw * cfg.charge_efficiency * cfg.slot_hours / session.capacity_kwh
    )
    soc_ub = cfg.soc_hw_max
    soc_lb = max(cfg.soc_hw_min, session.soc_dep_expected - reachable)
    return min(soc_lb, soc_ub), soc_ub


def soc_delta_to_power(delta_soc: float, capacity_kwh: float, cfg: StationConfig) -> float:
    """Grid-side power that moves the SoC by `delta_soc` in one slot.

    Efficiency divides on charge (more drawn than stored) and multiplies on discharge.
    """
    energy_kwh = delta_soc * capacity_kwh
    if energy_kwh >= 0:
        return energy_kwh / (cfg.charge_efficiency * cfg.slot_hours)
    return energy_kwh * cfg.charge_efficiency / cfg.slot_hours


def power_boundaries(
    pile: PileState,
    slot: tp.Union[int, TimeSlot],
    p_pile_kw: float,
    cfg: StationConfig,
) -> tp.Tuple[float, float]:
    """Return `(p_min_kw, p_max_kw)` for a docked pile during `slot`."""
    if pile.session is None or pile.soc_now is None:
        raise DomainError("Pile {} has no docked EV.".format(pile.pile_id))
    session = pile.session
    soc_lb, soc_ub = soc_envelope(session, slot, p_pile_kw, cfg)

    p_max = min(p_pile_kw, soc_delta_to_power(soc_ub - pile.soc_now, session.capacity_kwh, cfg))
    p_min = max(-p_pile_kw, soc_delta_to_power(soc_lb - pile.soc_now, session.capacity_kwh, cfg))
    if not cfg.allow_discharge:
        p_min = max(p_min, 0.0)

    # Arrivals shrink the pile limit, which can leave an EV below an envelope it can't recover
    # within one slot. Charging flat out is then the best available action.
    return min(p_min, p_max), p_max


def station_boundaries(state: StationState, cfg: StationConfig) -> tp.List[tp.Tuple[float, float]]:
    """Boundaries for every pile, `(0, 0)` for the empty ones."""
    n_docked = state.n_docked
    if n_docked == 0:
        return [(0.0, 0.0)] * len(state.piles)
    p_pile = per_pile_power_limit(cfg.p_station_max_kw, n_docked)
    return [
        power_boundaries(pile, state.slot, p_pile, cfg) if pile.docked else (0.0, 0.0)
        for pile in state.piles
    ]


def apply_power(pile: PileState, power_kw: float, cfg: StationConfig) -> SocUpdate:
    """SoC after applying `power_kw` (negative discharges) for one slot.

    The result is clamped to the hardware range; `clamped` reports a clamp larger than 1e-9.
    """
    if pile.session is None or pile.soc_now is None:
        raise DomainError("Pile {} has no docked EV.".format(pile.pile_id))
    capacity = pile.session.capacity_kwh
    eta = cfg.charge_efficiency
    if power_kw >= 0:
        soc = pile.soc_now + power_kw * cfg.slot_hours * eta / capacity
    else:
        soc = pile.soc_now + power_kw * cfg.slot_hours / (eta * capacity)

    bounded = min(max(soc, cfg.soc_hw_min), cfg.soc_hw_max)
    clamped = abs(bounded - soc) > CLAMP_TOLERANCE
    if clamped:
        logger.warning(
            "Pile %d: SoC %.9f clamped to %.9f after %.6g kW.", pile.pile_id, soc, bounded, power_kw
        )
    return SocUpdate(bounded, clamped)
