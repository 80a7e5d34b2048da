"""An actor, a critic, their target copies and optimizers, bundled as one agent's networks."""

import dataclasses
import typing as tp

import numpy as np

from .mlp import Mlp, init_mlp, mlp_spec, soft_update
from .optim import OptimizerState, init_optimizer

ACTOR_LR = 1e-4
CRITIC_LR = 1e-3
HIDDEN = (64, 64)


@dataclasses.dataclass(eq=False)
class ActorCritic:
    actor: Mlp
    critic: Mlp
    target_actor: Mlp
    target_critic: Mlp
    actor_opt: OptimizerState
    critic_opt: OptimizerState

    def copy(self) -> "ActorCritic":
        return ActorCritic(
            actor=self.actor.copy(),
            critic=self.critic.copy(),
            target_actor=self.target_actor.copy(),
            target_critic=self.target_critic.copy(),
            actor_opt=self.actor_opt.copy(),
            critic_opt=self.critic_opt.copy(),
        )

    def soft_sync(self, tau: float) -> None:
        """Blend the online networks into the targets."""
        self.target_actor = soft_update(self.target_actor, self.actor, tau)
        self.target_critic = soft_update(self.target_critic, self.critic, tau)


def init_actor_critic(
    actor_in: int,
    critic_in: int,
    rng: np.random.Generator,
    actor_lr: float = ACTOR_LR,
    critic_lr: float = CRITIC_LR,
    hidden: tp.Sequence[int] = HIDDEN,
) -> ActorCritic:
    """Fresh networks: a scalar-logit actor over `actor_in` features and a scalar critic over
    `critic_in` features. Targets start as exact copies."""
    actor = init_mlp(mlp_spec(actor_in, 1, hidden), rng)
    critic = init_mlp(mlp_spec(critic_in, 1, hidden), rng)
    return ActorCritic(
        actor=actor,
        critic=critic,
        target_actor=actor.copy(),
        target_critic=critic.copy(),
        actor_opt=init_optimizer(actor, actor_lr),
        critic_opt=init_optimizer(critic, critic_lr),
    )
