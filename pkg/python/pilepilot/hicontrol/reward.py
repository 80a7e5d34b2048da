"""The high-level reward: episode electricity cost plus a load-balance term."""

import collections
import math
import typing as tp

from ..simenv import excess_load_kw

LOAD_WINDOW_SLOTS = 24


def high_reward(
    prices: tp.Sequence[float],
    loads: tp.Sequence[float],
    load_now: float,
    load_avg: float,
    kappa: float,
    phi: float,
    contract_kw: float,
) -> float:
    """Reward of the slot that closed with total load `load_now`.

    `prices` and `loads` cover the episode up to and including that slot. The cost term charges
    energy at the slot price (exports earn nothing) and `phi` per kW above the contract.
    """
    energy = math.fsum(p * max(0.0, load) for p, load in zip(prices, loads))
    excess = math.fsum(excess_load_kw(load, contract_kw) for load in loads)
    return kappa * (-energy - phi * excess) - abs(load_now - load_avg)


class LoadTracker:
    """Trailing mean of the total load, warm-started with the first load it is asked about."""

    def __init__(self, window: int = LOAD_WINDOW_SLOTS):
        self._loads: tp.Deque[float] = collections.deque(maxlen=window)

    def average(self, current: float) -> float:
        """Mean over the trailing window, `current` itself while nothing has been pushed."""
        if not self._loads:
            return current
        return math.fsum(self._loads) / len(self._loads)

    def push(self, load: float) -> None:
        self._loads.append(load)

    def reset(self) -> None:
        self._loads.clear()
