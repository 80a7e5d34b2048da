"""The high-level agent deciding each slot whether the station charges or discharges."""

from .agent import (
    CHARGE,
    DISCHARGE,
    HighUpdate,
    discretize_action,
    high_action,
    high_critic_target,
    high_value,
    linear_sigma,
    update_high,
)
from .reward import LoadTracker, high_reward
from .types import (
    HIGH_STATE_DIM,
    LOW_STATE_DIM,
    PRICE_WINDOW_HOURS,
    HighState,
    HighTransition,
    StateScaler,
    build_high_state,
)

__all__ = [
    "CHARGE",
    "DISCHARGE",
    "HIGH_STATE_DIM",
    "LOW_STATE_DIM",
    "PRICE_WINDOW_HOURS",
    "HighState",
    "HighTransition",
    "HighUpdate",
    "LoadTracker",
    "StateScaler",
    "build_high_state",
    "discretize_action",
    "high_action",
    "high_critic_target",
    "high_reward",
    "high_value",
    "linear_sigma",
    "update_high",
]
