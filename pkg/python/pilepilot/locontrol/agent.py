"""Centralized critics and decentralized actors of the pile agents.

Every critic sees the scaled states of all piles followed by all piles' actions. Each actor only
sees its own pile.
"""

import dataclasses
import typing as tp

import numpy as np

from ..errors import DomainError, NumericalFault, ShapeError
from ..netcore import ActorCritic, Mlp, backward, forward, optimizer_step
from .actions import (
    augment_multiplier,
    map_actions,
    map_actions_grad,
    uncertainty_factors,
    uncertainty_factors_grad,
)
from .types import EMPTY_ACTION, JointObservation, LowTransition

if tp.TYPE_CHECKING:
    from ..hicontrol.types import StateScaler


@dataclasses.dataclass(frozen=True)
class LowUpdate:
    critic_loss: float
    actor_objective: float
    n_rows: int


def critic_input(features: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Flatten `(..., N, 6)` features and append the `(..., N)` actions."""
    lead = features.shape[:-2]
    return np.concatenate([features.reshape(*lead, -1), actions], axis=-1)


def low_logits(
    actors: tp.Sequence[Mlp],
    features: np.ndarray,
    docked: np.ndarray,
    rng: tp.Optional[np.random.Generator] = None,
    sigma: float = 0.0,
) -> np.ndarray:
    """Per-pile actor logits, with Gaussian exploration on the logit when `sigma > 0`.

    Empty piles get 0 and draw no noise.
    """
    if len(actors) != features.shape[0]:
        raise ShapeError("{} actors for {} piles.".format(len(actors), features.shape[0]))
    g = np.zeros(features.shape[0])
    for i, actor in enumerate(actors):
        if not docked[i]:
            continue
        g[i] = forward(actor, features[i])[0]
        if sigma > 0 and rng is not None:
            g[i] += rng.normal(0.0, sigma)
    return g


def joint_actions(
    g: np.ndarray, discs: np.ndarray, docked: np.ndarray, gated: bool = True
) -> np.ndarray:
    """Gated actions for docked piles, the neutral placeholder for empty ones."""
    return np.where(docked, map_actions(g, discs, gated), EMPTY_ACTION)


def low_values(
    critics: tp.Sequence[Mlp], features: np.ndarray, actions: np.ndarray, docked: np.ndarray
) -> tp.List[float]:
    """Critic values of the docked agents for one joint observation and action."""
    x = critic_input(features, actions)
    return [float(forward(critics[i], x)[0]) for i in range(len(critics)) if docked[i]]


def _target_actions(
    agents: tp.Sequence[ActorCritic],
    next_features: np.ndarray,
    next_discs: np.ndarray,
    next_docked: np.ndarray,
    gated: bool,
) -> np.ndarray:
    cols = []
    for j, agent in enumerate(agents):
        g = forward(agent.target_actor, next_features[:, j, :])[:, 0]
        a = map_actions(g, next_discs[:, j], gated)
        cols.append(np.where(next_docked[:, j], a, EMPTY_ACTION))
    return np.stack(cols, axis=1)


def low_critic_target(
    r_i: float,
    x_next: JointObservation,
    agents: tp.Sequence[ActorCritic],
    i: int,
    gamma: float,
    terminal: bool,
    scaler: "StateScaler",
    gated: bool = True,
) -> float:
    """`r_i + gamma * Q'_i(x', mu'_1(s'_1), ..., mu'_N(s'_N))`, `r_i` alone when terminal."""
    if terminal:
        return float(r_i)
    feats = x_next.features(scaler)[None]
    a_next = _target_actions(agents, feats, x_next.discs[None], x_next.docked[None], gated)
    q = forward(agents[i].target_critic, critic_input(feats, a_next))[0, 0]
    return float(r_i + gamma * q)


class LowBatch(tp.NamedTuple):
    """A minibatch of transitions stacked into arrays, shared by all agents' updates."""

    features: np.ndarray
    next_features: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    terminals: np.ndarray
    docked: np.ndarray
    discs: np.ndarray
    next_docked: np.ndarray
    next_discs: np.ndarray
    delta_soc: np.ndarray
    delta_t: np.ndarray


def stack_low_batch(batch: tp.Sequence[LowTransition], scaler: "StateScaler") -> LowBatch:
    if not batch:
        raise DomainError("Can't stack an empty batch.")
    return LowBatch(
        features=np.stack([tr.x.features(scaler) for tr in batch]),
        next_features=np.stack([tr.x_next.features(scaler) for tr in batch]),
        actions=np.stack([tr.actions for tr in batch]),
        rewards=np.stack([tr.rewards for tr in batch]),
        terminals=np.stack([tr.terminals for tr in batch]),
        docked=np.stack([tr.x.docked for tr in batch]),
        discs=np.stack([tr.x.discs for tr in batch]),
        next_docked=np.stack([tr.x_next.docked for tr in batch]),
        next_discs=np.stack([tr.x_next.discs for tr in batch]),
        delta_soc=np.stack([tr.delta_soc for tr in batch]),
        delta_t=np.stack([tr.delta_t for tr in batch]),
    )


def _critic_step(agent: ActorCritic, x: np.ndarray, y: np.ndarray) -> float:
    """Plain mean squared TD error. Takes no uncertainty inputs."""
    q = forward(agent.critic, x)[:, 0]
    td = q - y
    loss = float(np.mean(td * td))
    if not np.isfinite(loss):
        raise NumericalFault("Low-level critic loss is {}.".format(loss))
    grad, _ = backward(agent.critic, x, (2.0 * td / len(y))[:, None])
    agent.critic, agent.critic_opt = optimizer_step(agent.critic_opt, agent.critic, grad)
    return loss


def update_low(
    i: int,
    batch: tp.Union[tp.Sequence[LowTransition], LowBatch],
    agents: tp.Sequence[ActorCritic],
    scaler: "StateScaler",
    gamma: float,
    rho: float,
    epsilon: float = 1e-6,
    gated: bool = True,
    clamp_augmentation: bool = False,
) -> LowUpdate:
    """Update agent `i`'s critic, then its actor, on the rows where pile `i` held an EV.

    The critic regresses the raw value on the bootstrapped target. The actor ascends the
    augmented value with the other agents' actions taken from the batch and its own action
    recomputed by its current policy. Returns zero losses and `n_rows = 0` when pile `i` was
    empty throughout the batch. `batch` may be pre-stacked with `stack_low_batch`.

    Raises:
        DomainError: empty batch.
        NumericalFault: a loss or gradient turned non-finite.
    """
    data = batch if isinstance(batch, LowBatch) else stack_low_batch(batch, scaler)
    agent = agents[i]
    n = len(agents)
    mask = data.docked[:, i]
    n_rows = int(mask.sum())
    if n_rows == 0:
        return LowUpdate(critic_loss=0.0, actor_objective=0.0, n_rows=0)

    feats = data.features[mask]
    next_feats = data.next_features[mask]
    actions = data.actions[mask]
    rewards = data.rewards[mask, i]
    terminals = data.terminals[mask, i]

    a_next = _target_actions(agents, next_feats, data.next_discs[mask], data.next_docked[mask], gated)
    q_next = forward(agent.target_critic, critic_input(next_feats, a_next))[:, 0]
    y = rewards + gamma * np.where(terminals, 0.0, q_next)
    critic_loss = _critic_step(agent, critic_input(feats, actions), y)

    own = feats[:, i, :]
    g = forward(agent.actor, own)[:, 0]
    a_i = map_actions(g, data.discs[mask, i], gated)
    policy_actions = actions.copy()
    policy_actions[:, i] = a_i
    x = critic_input(feats, policy_actions)
    q = forward(agent.critic, x)[:, 0]
    _, dq_dx = backward(agent.critic, x, np.ones((n_rows, 1)))
    dq_da = dq_dx[:, n * feats.shape[-1] + i]

    delta_soc = data.delta_soc[mask, i]
    delta_t = data.delta_t[mask, i]
    factor = uncertainty_factors(a_i, delta_soc, delta_t, epsilon)
    raw_mult = augment_multiplier(factor, rho)
    mult = augment_multiplier(factor, rho, clamp_augmentation)
    d_mult = -rho * uncertainty_factors_grad(a_i, delta_soc, delta_t, epsilon)
    if clamp_augmentation:
        d_mult = np.where(raw_mult < 0, 0.0, d_mult)

    augmented = q * mult
    actor_objective = float(np.mean(augmented))
    if not np.isfinite(actor_objective):
        raise NumericalFault("Low-level actor objective of agent {} is {}.".format(i, actor_objective))
    d_aug_da = dq_da * mult + q * d_mult
    upstream = -(d_aug_da * map_actions_grad(g, gated) / n_rows)[:, None]
    grad, _ = backward(agent.actor, own, upstream)
    agent.actor, agent.actor_opt = optimizer_step(agent.actor_opt, agent.actor, grad)

    return LowUpdate(critic_loss=critic_loss, actor_objective=actor_objective, n_rows=n_rows)
