import typing as tp

import numpy as np

from pilepilot.simenv import (
    EvSession,
    PenaltyConfig,
    PileState,
    StationConfig,
    Trace,
    Traces,
)
from pilepilot.trainer import TrainConfig


def make_session(
    t_arr: int = 9,
    t_dep: int = 19,
    t_actual: tp.Optional[int] = None,
    soc_arr: float = 0.4,
    soc_dep: float = 0.8,
    capacity_kwh: float = 60.0,
) -> EvSession:
    return EvSession(
        t_arr=t_arr,
        t_dep_planned=t_dep,
        t_dep_actual=t_dep if t_actual is None else t_actual,
        soc_arr=soc_arr,
        soc_dep_expected=soc_dep,
        capacity_kwh=capacity_kwh,
    )


def docked(pile_id: int = 0, soc: float = 0.4, session: tp.Optional[EvSession] = None) -> PileState:
    return PileState(pile_id=pile_id, session=session or make_session(), soc_now=soc)


def make_traces(load: tp.Sequence[float], price: tp.Sequence[float]) -> Traces:
    return Traces(load=Trace(np.asarray(load, dtype=float), unit="kW"), price=Trace(np.asarray(price, dtype=float), unit="USD/kWh"))


def constant_traces(days: int, load_kw: float = 100.0, price: float = 0.05) -> Traces:
    return make_traces([load_kw] * (24 * days), [price] * (24 * days))


def station(n_piles: int = 2, **kwargs: tp.Any) -> StationConfig:
    return StationConfig(n_piles=n_piles, **kwargs)


def brute_force_penalty(peak_load_kw: float, cfg: PenaltyConfig) -> float:
    """Demand charge evaluated knee by knee, independently of `penalty_cost`."""
    first_knee = cfg.contract_kw
    second_knee = cfg.contract_kw + cfg.tier_threshold * cfg.contract_kw
    if peak_load_kw <= first_knee:
        return 0.0
    if peak_load_kw <= second_knee:
        return 2.0 * cfg.base_rate_usd_per_kw * (peak_load_kw - first_knee)
    return 2.0 * cfg.base_rate_usd_per_kw * (second_knee - first_knee) + 3.0 * cfg.base_rate_usd_per_kw * (
        peak_load_kw - second_knee
    )


def tiny_train_config(**kwargs: tp.Any) -> TrainConfig:
    """Small networks and buffers so a handful of episodes already trains."""
    defaults: tp.Dict[str, tp.Any] = {
        "episodes": 4,
        "buffer_capacity": 256,
        "batch_size": 16,
        "hidden_units": 8,
        "hidden_layers": 1,
    }
    defaults.update(kwargs)
    return TrainConfig(**defaults)
