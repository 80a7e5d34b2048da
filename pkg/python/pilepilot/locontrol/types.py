"""Observations and transitions of the per-pile agents."""

import dataclasses
import typing as tp

import numpy as np

from ..errors import DomainError, ShapeError

if tp.TYPE_CHECKING:
    from ..hicontrol.types import StateScaler


@dataclasses.dataclass(frozen=True)
class LowState:
    soc_now: float
    p_max_kw: float
    p_min_kw: float
    high_action_disc: int
    high_critic_value: float
    docked: bool

    def __post_init__(self):
        if self.p_min_kw > self.p_max_kw:
            raise DomainError(
                "p_min {} exceeds p_max {}.".format(self.p_min_kw, self.p_max_kw)
            )
        if not 0.0 <= self.soc_now <= 1.0:
            raise DomainError("soc_now {} outside [0, 1].".format(self.soc_now))
        if self.high_action_disc not in (0, 1):
            raise DomainError("high_action_disc must be 0 or 1.")


# Placeholder for a pile without an EV. Its action is pinned to 0.5, i.e. 0 kW.
EMPTY_LOW_STATE = LowState(
    soc_now=0.0,
    p_max_kw=0.0,
    p_min_kw=0.0,
    high_action_disc=1,
    high_critic_value=0.0,
    docked=False,
)
EMPTY_ACTION = 0.5


@dataclasses.dataclass(frozen=True)
class JointObservation:
    states: tp.Tuple[LowState, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        return len(self.states)

    @property
    def docked(self) -> np.ndarray:
        return np.array([s.docked for s in self.states], dtype=bool)

    @property
    def discs(self) -> np.ndarray:
        return np.array([s.high_action_disc for s in self.states], dtype=np.int64)

    def features(self, scaler: "StateScaler") -> np.ndarray:
        """`(N, 6)` scaled per-pile features."""
        return np.stack([scaler.low(s) for s in self.states])


@dataclasses.dataclass(frozen=True)
class UncertaintyInputs:
    """`delta_soc`: target minus current SoC. `delta_t`: slots left before planned departure."""

    delta_soc: float
    delta_t: float
    rho: float
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.delta_t < 1:
            raise DomainError("delta_t must be at least 1 slot, got {}.".format(self.delta_t))
        if self.rho < 0:
            raise DomainError("rho must be non-negative, got {}.".format(self.rho))
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive.")


@dataclasses.dataclass(frozen=True, eq=False)
class LowTransition:
    """One slot of joint experience.

    `delta_soc` and `delta_t` are per pile at the time of `x` and only feed the actor update.
    Empty piles carry `delta_soc = 0`, `delta_t = 1`.
    """

    x: JointObservation
    actions: np.ndarray
    rewards: np.ndarray
    x_next: JointObservation
    terminals: np.ndarray
    delta_soc: np.ndarray
    delta_t: np.ndarray

    def __post_init__(self):
        n = len(self.x)
        for name in ("actions", "rewards", "terminals", "delta_soc", "delta_t"):
            value = np.asarray(getattr(self, name))
            value = value.astype(bool) if name == "terminals" else value.astype(np.float64)
            if value.shape != (n,):
                raise ShapeError("{} must have shape ({},), got {}.".format(name, n, value.shape))
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if len(self.x_next) != n:
            raise ShapeError("x_next has {} piles, x has {}.".format(len(self.x_next), n))
        if np.any((self.actions < 0) | (self.actions > 1)):
            raise DomainError("Low-level actions must lie in [0, 1].")
