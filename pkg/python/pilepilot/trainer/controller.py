"""Per-slot decisions of the two-tier policy, shared by training rollouts and evaluation."""

import dataclasses
import typing as tp

import numpy as np

from ..hicontrol import (
    CHARGE,
    HIGH_STATE_DIM,
    LOW_STATE_DIM,
    HighState,
    StateScaler,
    build_high_state,
    discretize_action,
    high_action,
    high_value,
)
from ..locontrol import (
    EMPTY_ACTION,
    EMPTY_LOW_STATE,
    JointObservation,
    LowState,
    joint_actions,
    low_logits,
    low_values,
    optimal_power,
)
from ..netcore import ActorCritic, init_actor_critic
from ..simenv import SlotLedger, StationConfig, StationState, Traces, station_boundaries
from .config import TrainConfig


@dataclasses.dataclass(eq=False)
class Agents:
    """Every network of a run.

    Under the `ddpg` baseline `low` holds one shared agent.
    """

    high: ActorCritic
    low: tp.List[ActorCritic]

    def copy(self) -> "Agents":
        return Agents(high=self.high.copy(), low=[agent.copy() for agent in self.low])


def init_agents(cfg: TrainConfig, n_piles: int, rng: np.random.Generator) -> Agents:
    n_low = 1 if cfg.baseline == "ddpg" else n_piles
    kwargs: tp.Dict[str, tp.Any] = {
        "actor_lr": cfg.actor_lr,
        "critic_lr": cfg.critic_lr,
        "hidden": cfg.hidden,
    }
    high = init_actor_critic(HIGH_STATE_DIM, HIGH_STATE_DIM + 1, rng, **kwargs)
    low = [
        init_actor_critic(LOW_STATE_DIM, n_low * (LOW_STATE_DIM + 1), rng, **kwargs)
        for _ in range(n_low)
    ]
    return Agents(high=high, low=low)


@dataclasses.dataclass(frozen=True, eq=False)
class Decision:
    """Everything chosen at the start of one slot.

    `x`, `logits` and `actions` are per low-level agent (one entry under the `ddpg` baseline),
    `powers` and `bounds` per pile.
    """

    s_h: HighState
    a_h: tp.Optional[float]
    a_disc: int
    high_value: float
    x: JointObservation
    logits: np.ndarray
    actions: np.ndarray
    powers: tp.Tuple[float, ...]
    bounds: tp.Tuple[tp.Tuple[float, float], ...]
    low_values: tp.Tuple[float, ...]


def mean_low_state(states: tp.Sequence[LowState]) -> LowState:
    """Average of the docked piles' states, the empty placeholder when none is docked."""
    docked = [s for s in states if s.docked]
    if not docked:
        return EMPTY_LOW_STATE
    return LowState(
        soc_now=float(np.mean([s.soc_now for s in docked])),
        p_max_kw=float(np.mean([s.p_max_kw for s in docked])),
        p_min_kw=float(np.mean([s.p_min_kw for s in docked])),
        high_action_disc=CHARGE,
        high_critic_value=0.0,
        docked=True,
    )


class Controller:
    """Maps a station state to pile powers with the current networks.

    With `sigma_high`/`sigma_low` at zero (the default) decisions are noise-free and consume no
    randomness.
    """

    def __init__(
        self,
        agents: Agents,
        cfg: TrainConfig,
        station: StationConfig,
        traces: Traces,
        scaler: StateScaler,
    ):
        self.agents = agents
        self.cfg = cfg
        self.station = station
        self.traces = traces
        self.scaler = scaler

    def decide(
        self,
        state: StationState,
        history: tp.Sequence[SlotLedger],
        prev_low_values: tp.Sequence[float],
        rng: tp.Optional[np.random.Generator] = None,
        sigma_high: float = 0.0,
        sigma_low: float = 0.0,
    ) -> Decision:
        cfg = self.cfg
        s_h = build_high_state(
            state, history, self.traces, prev_low_values, cfg.price_window_hours
        )
        bounds = tuple(station_boundaries(state, self.station))

        if cfg.high_enabled:
            features_h = self.scaler.high(s_h)
            a_h: tp.Optional[float] = high_action(self.agents.high.actor, features_h, rng, sigma_high)
            a_disc = discretize_action(tp.cast(float, a_h))
            q_h = high_value(self.agents.high.critic, features_h, tp.cast(float, a_h))
        else:
            a_h, a_disc, q_h = None, CHARGE, 0.0

        states = [
            LowState(
                soc_now=tp.cast(float, pile.soc_now),
                p_max_kw=p_max,
                p_min_kw=p_min,
                high_action_disc=a_disc,
                high_critic_value=q_h,
                docked=True,
            )
            if pile.docked
            else EMPTY_LOW_STATE
            for pile, (p_min, p_max) in zip(state.piles, bounds)
        ]

        if cfg.baseline == "ddpg":
            x = JointObservation((mean_low_state(states),))
        else:
            x = JointObservation(tuple(states))
        features = x.features(self.scaler)
        docked = x.docked
        logits = low_logits([agent.actor for agent in self.agents.low], features, docked, rng, sigma_low)
        actions = joint_actions(logits, x.discs, docked, cfg.gated)
        values = low_values([agent.critic for agent in self.agents.low], features, actions, docked)

        if cfg.baseline == "ddpg":
            pile_actions = [float(actions[0]) if pile.docked else EMPTY_ACTION for pile in state.piles]
        else:
            pile_actions = [float(a) for a in actions]
        powers = tuple(
            float(optimal_power(a, p_min, p_max)) if pile.docked else 0.0
            for pile, a, (p_min, p_max) in zip(state.piles, pile_actions, bounds)
        )

        return Decision(
            s_h=s_h,
            a_h=a_h,
            a_disc=a_disc,
            high_value=q_h,
            x=x,
            logits=logits,
            actions=actions,
            powers=powers,
            bounds=bounds,
            low_values=tuple(values),
        )
