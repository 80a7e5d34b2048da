"""Acting, bootstrapping and updating the high-level actor-critic."""

import dataclasses
import typing as tp

import numpy as np

from ..errors import DomainError, NumericalFault
from ..netcore import ActorCritic, Mlp, backward, forward, optimizer_step, sigmoid
from .types import HighState, HighTransition, StateScaler

CHARGE = 1
DISCHARGE = 0
GATE = 0.5


@dataclasses.dataclass(frozen=True)
class HighUpdate:
    critic_loss: float
    actor_objective: float


def discretize_action(a_h: float) -> int:
    """1 (charge) iff `a_h >= 0.5`, else 0 (discharge)."""
    if not 0.0 <= a_h <= 1.0:
        raise DomainError("High-level action must lie in [0, 1], got {}.".format(a_h))
    return CHARGE if a_h >= GATE else DISCHARGE


def linear_sigma(episode: int, n_episodes: int, start: float, end: float) -> float:
    """Exploration scale decayed linearly from `start` at episode 0 to `end` at the last."""
    if n_episodes <= 1:
        return start
    frac = min(max(episode / (n_episodes - 1), 0.0), 1.0)
    return start + (end - start) * frac


def high_action(
    actor: Mlp,
    features: np.ndarray,
    rng: tp.Optional[np.random.Generator] = None,
    sigma: float = 0.0,
) -> float:
    """Squashed actor output, with clipped Gaussian exploration when `sigma > 0`."""
    a_h = float(sigmoid(forward(actor, features)[0]))
    if sigma > 0 and rng is not None:
        a_h += float(rng.normal(0.0, sigma))
    return float(np.clip(a_h, 0.0, 1.0))


def high_value(critic: Mlp, features: np.ndarray, a_h: float) -> float:
    return float(forward(critic, np.append(features, a_h))[0])


def high_critic_target(
    r_h: float,
    s_h_next: np.ndarray,
    target_actor: Mlp,
    target_critic: Mlp,
    gamma: float,
    terminal: bool,
) -> float:
    """Bootstrapped target `r + gamma * Q'(s', mu'(s'))`, `r` alone on terminal slots.

    `s_h_next` is the scaled next observation.
    """
    if terminal:
        return float(r_h)
    a_next = high_action(target_actor, s_h_next)
    return float(r_h + gamma * high_value(target_critic, s_h_next, a_next))


def _batch_targets(
    rewards: np.ndarray,
    next_features: np.ndarray,
    terminals: np.ndarray,
    nets: ActorCritic,
    gamma: float,
) -> np.ndarray:
    a_next = sigmoid(forward(nets.target_actor, next_features)[:, 0])
    q_next = forward(nets.target_critic, np.column_stack([next_features, a_next]))[:, 0]
    return rewards + gamma * np.where(terminals, 0.0, q_next)


def update_high(
    batch: tp.Sequence[HighTransition],
    nets: ActorCritic,
    scaler: StateScaler,
    gamma: float,
) -> HighUpdate:
    """One critic step on the mean squared TD error, then one actor step up the critic.

    `nets` gets its online networks and optimizers replaced. Targets are left to the caller's
    soft sync.

    Raises:
        DomainError: empty batch.
        NumericalFault: a loss or gradient turned non-finite.
    """
    if not batch:
        raise DomainError("update_high needs a non-empty batch.")
    b = len(batch)
    features = scaler.high_batch([tr.s_h for tr in batch])
    next_features = scaler.high_batch([tr.s_h_next for tr in batch])
    actions = np.array([tr.a_h for tr in batch])
    rewards = np.array([tr.r_h for tr in batch])
    terminals = np.array([tr.terminal for tr in batch])

    y = _batch_targets(rewards, next_features, terminals, nets, gamma)
    critic_in = np.column_stack([features, actions])
    q = forward(nets.critic, critic_in)[:, 0]
    td = q - y
    critic_loss = float(np.mean(td * td))
    if not np.isfinite(critic_loss):
        raise NumericalFault("High-level critic loss is {}.".format(critic_loss))
    grad, _ = backward(nets.critic, critic_in, (2.0 * td / b)[:, None])
    nets.critic, nets.critic_opt = optimizer_step(nets.critic_opt, nets.critic, grad)

    logits = forward(nets.actor, features)[:, 0]
    a_pi = sigmoid(logits)
    policy_in = np.column_stack([features, a_pi])
    q_pi = forward(nets.critic, policy_in)[:, 0]
    actor_objective = float(np.mean(q_pi))
    if not np.isfinite(actor_objective):
        raise NumericalFault("High-level actor objective is {}.".format(actor_objective))
    _, dq_dinput = backward(nets.critic, policy_in, np.full((b, 1), 1.0 / b))
    dq_da = dq_dinput[:, -1]
    # Ascend the objective: descend its negation through the squashing.
    upstream = -(dq_da * a_pi * (1.0 - a_pi))[:, None]
    grad, _ = backward(nets.actor, features, upstream)
    nets.actor, nets.actor_opt = optimizer_step(nets.actor_opt, nets.actor, grad)

    return HighUpdate(critic_loss=critic_loss, actor_objective=actor_objective)
