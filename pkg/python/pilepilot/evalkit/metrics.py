"""Per-session SoC metrics and the aggregated cost report."""

import dataclasses
import math
import typing as tp

from ..errors import DomainError
from ..simenv import EvSession, PenaltyConfig, SlotLedger, penalty_cost

MAINTENANCE_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class SessionOutcome:
    session: EvSession
    soc_at_actual_departure: float
    soc_at_midpoint: float

    @property
    def midpoint_slot(self) -> int:
        return midpoint_slot(self.session)


def midpoint_slot(session: EvSession) -> int:
    """Slot halfway between arrival and actual departure, rounded down."""
    return (session.t_arr + session.t_dep_actual) // 2


def soc_fulfillment(outcome: SessionOutcome) -> float:
    """Departure SoC as a percentage of the expected SoC. Not clipped."""
    expected = outcome.session.soc_dep_expected
    if not expected > 0:
        raise DomainError("Fulfillment needs a positive expected SoC.")
    return 100.0 * outcome.soc_at_actual_departure / expected


def soc_maintenance(outcome: SessionOutcome) -> tp.Optional[float]:
    """Progress at the midpoint relative to the whole session's progress, in percent.

    `None` when the EV left with the SoC it arrived with.
    """
    soc_arr = outcome.session.soc_arr
    denominator = outcome.soc_at_actual_departure - soc_arr
    if abs(denominator) <= MAINTENANCE_TOLERANCE:
        return None
    return 100.0 * (outcome.soc_at_midpoint - soc_arr) / denominator


def user_satisfaction(fulfillment: float, maintenance: float) -> float:
    return (fulfillment + maintenance) / 2.0


@dataclasses.dataclass(frozen=True)
class MetricsReport:
    """Costs over a horizon and per-session SoC means.

    Means over an empty set are NaN and named in `undefined`.
    """

    penalty_cost_usd: float
    energy_cost_usd: float
    total_cost_usd: float
    soc_fulfillment_pct: float
    soc_maintenance_pct: float
    user_satisfaction_pct: float
    n_sessions: int
    peak_load_kw: float = 0.0
    maintenance_excluded: int = 0
    undefined: tp.Tuple[str, ...] = ()
    infeasible_sessions: int = 0

    def to_dict(self) -> tp.Dict[str, tp.Any]:
        """JSON-ready, NaN becomes `None`."""
        out: tp.Dict[str, tp.Any] = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, float) and math.isnan(value):
                value = None
            elif isinstance(value, tuple):
                value = list(value)
            out[field.name] = value
        return out


def _mean(values: tp.Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def build_report(
    ledgers: tp.Sequence[SlotLedger],
    outcomes: tp.Sequence[SessionOutcome],
    penalty_cfg: PenaltyConfig,
    infeasible_sessions: int = 0,
) -> MetricsReport:
    """Aggregate a horizon. The demand charge is billed once, from the horizon's peak."""
    energy = math.fsum(ledger.energy_cost for ledger in ledgers)
    peak = max((max(0.0, ledger.total_load_kw) for ledger in ledgers), default=0.0)
    penalty = penalty_cost(peak, penalty_cfg)

    fulfillment = [soc_fulfillment(o) for o in outcomes]
    maintenance: tp.List[float] = []
    satisfaction: tp.List[float] = []
    excluded = 0
    for o, f in zip(outcomes, fulfillment):
        m = soc_maintenance(o)
        if m is None:
            excluded += 1
            continue
        maintenance.append(m)
        satisfaction.append(user_satisfaction(f, m))

    means = {
        "soc_fulfillment_pct": _mean(fulfillment),
        "soc_maintenance_pct": _mean(maintenance),
        "user_satisfaction_pct": _mean(satisfaction),
    }
    return MetricsReport(
        penalty_cost_usd=penalty,
        energy_cost_usd=energy,
        total_cost_usd=energy + penalty,
        n_sessions=len(outcomes),
        peak_load_kw=peak,
        maintenance_excluded=excluded,
        undefined=tuple(name for name, value in means.items() if math.isnan(value)),
        infeasible_sessions=infeasible_sessions,
        **means,
    )


def session_outcomes(ledgers: tp.Sequence[SlotLedger]) -> tp.List[SessionOutcome]:
    """One outcome per departure recorded in `ledgers`, in departure order.

    The midpoint SoC is the pile's SoC at the start of the midpoint slot.
    """
    by_slot = {ledger.slot: ledger for ledger in ledgers}
    outcomes = []
    for ledger in ledgers:
        for departure in ledger.departures:
            session = departure.session
            mid = by_slot.get(midpoint_slot(session))
            soc_mid = None if mid is None else mid.soc_start[departure.pile_id]
            if soc_mid is None:
                raise DomainError(
                    "No SoC recorded for pile {} at midpoint slot {}.".format(
                        departure.pile_id, midpoint_slot(session)
                    )
                )
            outcomes.append(
                SessionOutcome(
                    session=session,
                    soc_at_actual_departure=departure.final_soc,
                    soc_at_midpoint=soc_mid,
                )
            )
    return outcomes
