"""Small fixed-shape numpy MLPs with exact backprop, Adam and soft target updates."""

from .actor_critic import ACTOR_LR, CRITIC_LR, HIDDEN, ActorCritic, init_actor_critic
from .checkpoint import (
    agent_from_dict,
    agent_to_dict,
    load_checkpoint,
    net_from_dict,
    net_to_dict,
    save_checkpoint,
)
from .mlp import (
    LayerSpec,
    Mlp,
    backward,
    finite_difference_grad,
    forward,
    init_mlp,
    mlp_spec,
    sigmoid,
    soft_update,
)
from .optim import OptimizerState, init_optimizer, optimizer_step

__all__ = [
    "ACTOR_LR",
    "CRITIC_LR",
    "HIDDEN",
    "ActorCritic",
    "LayerSpec",
    "Mlp",
    "OptimizerState",
    "agent_from_dict",
    "agent_to_dict",
    "backward",
    "finite_difference_grad",
    "forward",
    "init_actor_critic",
    "init_mlp",
    "init_optimizer",
    "load_checkpoint",
    "mlp_spec",
    "net_from_dict",
    "net_to_dict",
    "optimizer_step",
    "save_checkpoint",
    "sigmoid",
    "soft_update",
]
