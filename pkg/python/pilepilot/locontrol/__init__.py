"""The per-pile agents: gated power actions and the uncertainty-aware actor update."""

from .actions import (
    augment_multiplier,
    augment_q,
    low_reward,
    map_action,
    map_actions,
    map_actions_grad,
    optimal_power,
    uncertainty_factor,
    uncertainty_factors,
    uncertainty_factors_grad,
)
from .agent import (
    LowBatch,
    LowUpdate,
    critic_input,
    joint_actions,
    low_critic_target,
    low_logits,
    low_values,
    stack_low_batch,
    update_low,
)
from .types import (
    EMPTY_ACTION,
    EMPTY_LOW_STATE,
    JointObservation,
    LowState,
    LowTransition,
    UncertaintyInputs,
)

__all__ = [
    "EMPTY_ACTION",
    "EMPTY_LOW_STATE",
    "JointObservation",
    "LowBatch",
    "LowState",
    "LowTransition",
    "LowUpdate",
    "UncertaintyInputs",
    "augment_multiplier",
    "augment_q",
    "critic_input",
    "joint_actions",
    "low_critic_target",
    "low_logits",
    "low_reward",
    "low_values",
    "map_action",
    "map_actions",
    "map_actions_grad",
    "optimal_power",
    "stack_low_batch",
    "uncertainty_factor",
    "uncertainty_factors",
    "uncertainty_factors_grad",
    "update_low",
]
