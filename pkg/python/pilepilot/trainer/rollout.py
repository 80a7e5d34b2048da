"""One simulated day of experience."""

import dataclasses
import logging
import math
import typing as tp

import numpy as np

from ..hicontrol import HighTransition, LoadTracker, high_reward
from ..locontrol import LowTransition, low_reward
from ..simenv import EvSession, PenaltyConfig, SlotLedger, Station, StationState
from .config import TrainConfig
from .controller import Controller, Decision

logger = logging.getLogger(__name__)

SLOTS_PER_EPISODE = 24


@dataclasses.dataclass(frozen=True)
class EpisodeSummary:
    energy_cost: float
    peak_load_kw: float
    high_reward: float
    mean_low_reward: float
    n_high_transitions: int
    n_low_transitions: int
    clamp_faults: int


@dataclasses.dataclass(eq=False)
class Episode:
    high: tp.List[HighTransition]
    low: tp.List[LowTransition]
    ledgers: tp.List[SlotLedger]
    summary: EpisodeSummary


def _pile_rewards(
    state: StationState, decision: Decision, ledger: SlotLedger, omega: float
) -> np.ndarray:
    rewards = np.zeros(len(state.piles))
    for i, pile in enumerate(state.piles):
        if pile.session is None:
            continue
        rewards[i] = low_reward(
            decision.powers[i],
            state.price,
            tp.cast(float, ledger.soc_end[i]),
            pile.session.soc_dep_expected,
            omega,
        )
    return rewards


def _urgency_inputs(state: StationState) -> tp.Tuple[np.ndarray, np.ndarray]:
    n = len(state.piles)
    delta_soc, delta_t = np.zeros(n), np.ones(n)
    for i, pile in enumerate(state.piles):
        if pile.session is None:
            continue
        delta_soc[i] = pile.session.soc_dep_expected - tp.cast(float, pile.soc_now)
        delta_t[i] = pile.session.t_dep_planned - state.slot.index
    return delta_soc, delta_t


def _low_transition(
    state: StationState,
    decision: Decision,
    next_decision: Decision,
    ledger: SlotLedger,
    rewards: np.ndarray,
    last: bool,
    shared: bool,
) -> LowTransition:
    departed = {d.pile_id for d in ledger.departures}
    if shared:
        docked_rewards = [rewards[i] for i, pile in enumerate(state.piles) if pile.docked]
        next_docked = bool(next_decision.x.docked[0])
        delta_soc, delta_t = np.zeros(1), np.ones(1)
        return LowTransition(
            x=decision.x,
            actions=decision.actions,
            rewards=np.array([math.fsum(docked_rewards) / len(docked_rewards)]),
            x_next=next_decision.x,
            terminals=np.array([last or not next_docked]),
            delta_soc=delta_soc,
            delta_t=delta_t,
        )

    terminals = np.array(
        [last or i in departed or not pile.docked for i, pile in enumerate(state.piles)]
    )
    delta_soc, delta_t = _urgency_inputs(state)
    return LowTransition(
        x=decision.x,
        actions=decision.actions,
        rewards=rewards,
        x_next=next_decision.x,
        terminals=terminals,
        delta_soc=delta_soc,
        delta_t=delta_t,
    )


def run_episode(
    station: Station,
    controller: Controller,
    cfg: TrainConfig,
    penalty: PenaltyConfig,
    day: int,
    sessions: tp.Sequence[EvSession],
    rng: np.random.Generator,
    sigma_high: float = 0.0,
    sigma_low: float = 0.0,
    on_slot: tp.Optional[tp.Callable[[Episode], None]] = None,
) -> Episode:
    """Roll the controller through `day` with `sessions` docking, collecting transitions.

    High-level rewards are stored multiplied by `cfg.high_reward_scale`; the summary reports
    them unscaled. `on_slot` is called after every slot with the episode so far (the per-slot
    update cadence hooks in here).
    """
    state = station.reset(day, sessions)
    tracker = LoadTracker()
    episode = Episode(high=[], low=[], ledgers=[], summary=EpisodeSummary(0, 0, 0, 0, 0, 0, 0))
    prices: tp.List[float] = []
    loads: tp.List[float] = []
    high_total = 0.0
    low_rewards: tp.List[float] = []
    shared = cfg.baseline == "ddpg"

    decision = controller.decide(state, episode.ledgers, (), rng, sigma_high, sigma_low)
    for k in range(SLOTS_PER_EPISODE):
        last = k == SLOTS_PER_EPISODE - 1
        next_state, ledger = station.step(state, decision.powers)
        episode.ledgers.append(ledger)
        if last:
            next_decision = controller.decide(next_state, episode.ledgers, decision.low_values)
        else:
            next_decision = controller.decide(
                next_state, episode.ledgers, decision.low_values, rng, sigma_high, sigma_low
            )

        load = ledger.total_load_kw
        prices.append(ledger.price)
        loads.append(load)
        r_h = high_reward(
            prices, loads, load, tracker.average(load), cfg.kappa, cfg.phi, penalty.contract_kw
        )
        tracker.push(load)
        high_total += r_h
        if cfg.high_enabled:
            episode.high.append(
                HighTransition(
                    s_h=decision.s_h,
                    a_h=tp.cast(float, decision.a_h),
                    r_h=r_h * cfg.high_reward_scale,
                    s_h_next=next_decision.s_h,
                    terminal=last,
                )
            )

        if state.n_docked:
            rewards = _pile_rewards(state, decision, ledger, cfg.omega)
            low_rewards.extend(rewards[i] for i in state.docked_ids)
            episode.low.append(
                _low_transition(state, decision, next_decision, ledger, rewards, last, shared)
            )

        if on_slot is not None:
            on_slot(episode)
        state, decision = next_state, next_decision

    episode.summary = EpisodeSummary(
        energy_cost=math.fsum(ledger.energy_cost for ledger in episode.ledgers),
        peak_load_kw=max(ledger.total_load_kw for ledger in episode.ledgers),
        high_reward=high_total,
        mean_low_reward=math.fsum(low_rewards) / len(low_rewards) if low_rewards else 0.0,
        n_high_transitions=len(episode.high),
        n_low_transitions=len(episode.low),
        clamp_faults=sum(ledger.clamp_faults for ledger in episode.ledgers),
    )
    logger.debug(
        "Day %d: %d high and %d low transitions, energy cost %.4f.",
        day,
        len(episode.high),
        len(episode.low),
        episode.summary.energy_cost,
    )
    return episode
