"""Value types of the charging station world.

Every type here is a frozen value: states are never mutated in place, `step` returns new ones.
Slot fields on sessions are global slot indices (hours since the first reading of the traces).
"""

import dataclasses
import datetime as dt
import math
import typing as tp

import numpy as np

from ..errors import AlignmentError, ConfigError, DomainError

DEFAULT_TRACE_START = dt.datetime(2018, 7, 2)  # A Monday, midnight.


@dataclasses.dataclass(frozen=True)
class TimeSlot:
    """An hourly slot. `index` counts hours since the start of the traces."""

    index: int
    hour_of_day: int
    day_of_week: int

    @classmethod
    def from_index(cls, index: int, start: dt.datetime = DEFAULT_TRACE_START) -> "TimeSlot":
        hours = start.hour + index
        return cls(
            index=index,
            hour_of_day=hours % 24,
            day_of_week=(start.weekday() + hours // 24) % 7,
        )


def day_start_index(trace_start: dt.datetime, day: int) -> int:
    """Global slot of midnight of `day`, day 0 being the first whole day after `trace_start`."""
    return (24 - trace_start.hour) % 24 + 24 * day


def slot_index(slot: tp.Union[int, TimeSlot]) -> int:
    """Accept either a bare index or a `TimeSlot`."""
    if isinstance(slot, TimeSlot):
        return slot.index
    return int(slot)


@dataclasses.dataclass(frozen=True, eq=False)
class Trace:
    """An hourly series (kW for load, USD/kWh for price) starting at `start`."""

    values: np.ndarray
    start: dt.datetime = DEFAULT_TRACE_START
    unit: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DomainError("Trace values must be one-dimensional, got shape {}.".format(values.shape))
        if not np.all(np.isfinite(values)):
            raise DomainError("Trace values must all be finite.")
        if np.any(values < 0):
            raise DomainError("Trace values must be non-negative.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return float(self.values[index])

    def at(self, index: int) -> float:
        """Value at `index`.

        Raises:
            DomainError: `index` lies outside the trace.
        """
        if not 0 <= index < len(self.values):
            raise DomainError(
                "Slot {} outside the trace's {} hours.".format(index, len(self.values))
            )
        return float(self.values[index])

    def window(self, start: int, stop: int) -> np.ndarray:
        return self.values[max(start, 0) : max(stop, 0)]


@dataclasses.dataclass(frozen=True, eq=False)
class Traces:
    """The aligned building load and price traces driving one simulation."""

    load: Trace
    price: Trace

    def __post_init__(self):
        if len(self.load) != len(self.price) or self.load.start != self.price.start:
            raise AlignmentError(
                "Load ({} h from {}) and price ({} h from {}) traces are misaligned.".format(
                    len(self.load), self.load.start, len(self.price), self.price.start
                )
            )
        if self.n_days < 1:
            raise DomainError(
                "Traces of {} h from {} cover no whole day.".format(len(self.load), self.start)
            )

    @property
    def start(self) -> dt.datetime:
        return self.load.start

    @property
    def first_midnight(self) -> int:
        return day_start_index(self.start, 0)

    @property
    def n_days(self) -> int:
        """Whole days (midnight to midnight) covered by the traces."""
        return max(0, (len(self.load) - self.first_midnight) // 24)

    def day_start(self, day: int) -> int:
        """Global slot index of midnight of `day` (day 0 is the first whole day)."""
        return day_start_index(self.start, day)

    def slot(self, index: int) -> TimeSlot:
        return TimeSlot.from_index(index, self.start)


@dataclasses.dataclass(frozen=True)
class EvSession:
    """One EV's charging request plus its (hidden) actual departure."""

    t_arr: int
    t_dep_planned: int
    t_dep_actual: int
    soc_arr: float
    soc_dep_expected: float
    capacity_kwh: float = 60.0

    def __post_init__(self):
        if not self.t_arr < self.t_dep_planned:
            raise DomainError("Session must arrive before its planned departure.")
        if not self.t_arr + 1 <= self.t_dep_actual <= self.t_dep_planned:
            raise DomainError(
                "Actual departure {} must lie in [t_arr + 1, t_dep_planned] = [{}, {}].".format(
                    self.t_dep_actual, self.t_arr + 1, self.t_dep_planned
                )
            )
        if not 0.0 <= self.soc_arr < self.soc_dep_expected <= 1.0:
            raise DomainError(
                "Need 0 <= soc_arr < soc_dep_expected <= 1, got {} and {}.".format(
                    self.soc_arr, self.soc_dep_expected
                )
            )
        if not self.capacity_kwh > 0:
            raise DomainError("Battery capacity must be positive.")


@dataclasses.dataclass(frozen=True)
class PileState:
    pile_id: int
    session: tp.Optional[EvSession] = None
    soc_now: tp.Optional[float] = None

    def __post_init__(self):
        if (self.session is None) != (self.soc_now is None):
            raise DomainError("Pile {}: soc_now is set iff a session is docked.".format(self.pile_id))
        if self.soc_now is not None and not 0.0 <= self.soc_now <= 1.0:
            raise DomainError("Pile {}: soc_now {} outside [0, 1].".format(self.pile_id, self.soc_now))

    @property
    def docked(self) -> bool:
        return self.session is not None


@dataclasses.dataclass(frozen=True)
class StationConfig:
    """Physical limits of the station."""

    n_piles: int = 10
    p_station_max_kw: float = 150.0
    charge_efficiency: float = 0.95
    soc_hw_min: float = 0.1
    soc_hw_max: float = 1.0
    slot_hours: float = 1.0
    allow_discharge: bool = True

    def __post_init__(self):
        if self.n_piles < 1:
            raise ConfigError("[n_piles]: Must be at least 1.")
        if not self.p_station_max_kw > 0:
            raise ConfigError("[p_station_max_kw]: Must be positive.")
        if not 0 < self.charge_efficiency <= 1:
            raise ConfigError("[charge_efficiency]: Must lie in (0, 1].")
        if not 0 <= self.soc_hw_min < self.soc_hw_max <= 1:
            raise ConfigError("[soc_hw_min]: Need 0 <= soc_hw_min < soc_hw_max <= 1.")
        if not self.slot_hours > 0:
            raise ConfigError("[slot_hours]: Must be positive.")


@dataclasses.dataclass(frozen=True)
class PenaltyConfig:
    """Tiered demand charge: 2x base rate up to the tier, 3x beyond it."""

    contract_kw: float = 700.0
    base_rate_usd_per_kw: float = 15.0
    tier_threshold: float = 0.1

    def __post_init__(self):
        if not self.contract_kw > 0:
            raise ConfigError("[contract_kw]: Must be positive.")
        if not self.base_rate_usd_per_kw > 0:
            raise ConfigError("[base_rate_usd_per_kw]: Must be positive.")
        if not 0 < self.tier_threshold < 1:
            raise ConfigError("[tier_threshold]: Must lie in (0, 1).")


@dataclasses.dataclass(frozen=True)
class StationState:
    """Snapshot at the start of a slot.

    `upcoming[i]` is pile i's session for the day while it hasn't arrived yet.
    """

    slot: TimeSlot
    piles: tp.Tuple[PileState, ...]
    building_load_kw: float
    price: float
    peak_load_kw: float = 0.0
    cumulative_energy_cost: float = 0.0
    upcoming: tp.Tuple[tp.Optional[EvSession], ...] = ()

    @property
    def n_docked(self) -> int:
        return sum(1 for pile in self.piles if pile.docked)

    @property
    def docked_ids(self) -> tp.List[int]:
        return [pile.pile_id for pile in self.piles if pile.docked]


@dataclasses.dataclass(frozen=True)
class Departure:
    pile_id: int
    session: EvSession
    final_soc: float


@dataclasses.dataclass(frozen=True)
class SlotLedger:
    """What happened during one slot."""

    slot: int
    building_load_kw: float
    price: float
    total_load_kw: float
    energy_cost: float
    powers: tp.Tuple[float, ...]
    soc_start: tp.Tuple[tp.Optional[float], ...]
    soc_end: tp.Tuple[tp.Optional[float], ...]
    departures: tp.Tuple[Departure, ...] = ()
    clamp_faults: int = 0

    @property
    def ev_power_kw(self) -> float:
        return math.fsum(self.powers)
