"""EV population: one charging session per pile per working day."""

import dataclasses
import typing as tp

import numpy as np

from ..errors import DomainError
from .types import EvSession

Scenario = tp.Literal["certain", "uncertain"]
SCENARIOS: tp.Tuple[str, ...] = ("certain", "uncertain")


@dataclasses.dataclass(frozen=True)
class ClippedNormal:
    mean: float
    std: float
    low: float
    high: float

    def sample(self, rng: np.random.Generator) -> float:
        return float(np.clip(rng.normal(self.mean, self.std), self.low, self.high))


@dataclasses.dataclass(frozen=True)
class SessionDistribution:
    """Workplace arrival/departure behaviour (hours of day, SoC fractions)."""

    arrival_hour: ClippedNormal = ClippedNormal(9.0, 1.0, 7.0, 12.0)
    departure_hour: ClippedNormal = ClippedNormal(19.0, 1.0, 16.0, 23.0)
    soc_arrival: ClippedNormal = ClippedNormal(0.4, 0.1, 0.3, 0.6)
    soc_departure: ClippedNormal = ClippedNormal(0.8, 0.1, 0.6, 0.9)
    capacity_kwh: float = 60.0


WORKPLACE = SessionDistribution()


def sample_ev_sessions(
    rng: np.random.Generator,
    day: int,
    scenario: Scenario,
    n_piles: int,
    day_start: tp.Optional[int] = None,
    distribution: SessionDistribution = WORKPLACE,
) -> tp.List[EvSession]:
    """Sample one session per pile for `day`.

    Times are rounded to whole hours and offset by `day_start` (defaults to `24 * day`). In the
    uncertain scenario the actual departure is uniform over the slots in
    `[t_arr + 1, t_dep_planned)`.
    """
    if scenario not in SCENARIOS:
        raise DomainError("Unknown scenario {!r}, expected one of {}.".format(scenario, SCENARIOS))
    base = 24 * day if day_start is None else day_start

    sessions = []
    for _ in range(n_piles):
        while True:
            t_arr = int(np.rint(distribution.arrival_hour.sample(rng)))
            t_dep = int(np.rint(distribution.departure_hour.sample(rng)))
            soc_arr = distribution.soc_arrival.sample(rng)
            soc_dep = distribution.soc_departure.sample(rng)
            if t_arr < t_dep and soc_arr < soc_dep:
                break

        if scenario == "certain":
            t_actual = t_dep
        elif t_dep - t_arr > 1:
            t_actual = int(rng.integers(t_arr + 1, t_dep))
        else:
            # No slot strictly before the planned departure leaves the EV controllable.
            t_actual = t_dep

        sessions.append(
            EvSession(
                t_arr=base + t_arr,
                t_dep_planned=base + t_dep,
                t_dep_actual=base + t_actual,
                soc_arr=soc_arr,
                soc_dep_expected=soc_dep,
                capacity_kwh=distribution.capacity_kwh,
            )
        )
    return sessions
