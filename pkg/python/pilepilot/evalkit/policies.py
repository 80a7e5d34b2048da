"""Policies the evaluator can drive: the learned controller and two references."""

import typing as tp

import numpy as np

from ..locontrol import optimal_power
from ..simenv import SlotLedger, StationConfig, StationState, station_boundaries
from ..trainer import Controller


class Policy(tp.Protocol):
    name: str

    def reset(self) -> None:
        """Forget everything about the previous day."""

    def decide(self, state: StationState, rng: np.random.Generator) -> tp.Tuple[float, ...]:
        """Pile powers for the slot starting at `state`."""

    def observe(self, ledger: SlotLedger) -> None:
        """Record how the slot went."""


class _ActionPolicy:
    """Maps a per-pile action in [0, 1] onto the pile's boundaries."""

    name = "action"

    def __init__(self, station: StationConfig):
        self.station = station

    def reset(self) -> None:
        pass

    def observe(self, ledger: SlotLedger) -> None:
        pass

    def action(self, rng: np.random.Generator) -> float:
        raise NotImplementedError

    def decide(self, state: StationState, rng: np.random.Generator) -> tp.Tuple[float, ...]:
        bounds = station_boundaries(state, self.station)
        return tuple(
            float(optimal_power(self.action(rng), p_min, p_max)) if pile.docked else 0.0
            for pile, (p_min, p_max) in zip(state.piles, bounds)
        )


class MaxChargePolicy(_ActionPolicy):
    """Always charge at the upper boundary."""

    name = "max-charge"

    def action(self, rng: np.random.Generator) -> float:
        return 1.0


class RandomPolicy(_ActionPolicy):
    name = "random"

    def action(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(0.0, 1.0))


class LearnedPolicy:
    """Noise-free execution of trained (or freshly initialised) networks."""

    name = "learned"

    def __init__(self, controller: Controller):
        self.controller = controller
        self._history: tp.List[SlotLedger] = []
        self._low_values: tp.Tuple[float, ...] = ()

    def reset(self) -> None:
        self._history = []
        self._low_values = ()

    def decide(self, state: StationState, rng: np.random.Generator) -> tp.Tuple[float, ...]:
        decision = self.controller.decide(state, self._history, self._low_values)
        self._low_values = decision.low_values
        return decision.powers

    def observe(self, ledger: SlotLedger) -> None:
        self._history.append(ledger)


POLICY_NAMES: tp.Tuple[str, ...] = ("learned", "max-charge", "random")
