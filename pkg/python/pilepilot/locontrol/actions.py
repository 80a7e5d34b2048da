"""Action gating, power scaling, the pile reward and the uncertainty-aware value."""

import math
import typing as tp

import numpy as np

from ..netcore import sigmoid
from .types import UncertaintyInputs

ArrayLike = tp.Union[float, np.ndarray]


def map_action(g: float, high_action_disc: int, gated: bool = True) -> float:
    """Squash the actor logit into the half of [0, 1] the high-level action allows.

    Charge maps to [0.5, 1], discharge to [0, 0.5). Ungated, the whole of [0, 1] is reachable.
    """
    return float(map_actions(np.array([g]), np.array([high_action_disc]), gated)[0])


def map_actions(g: np.ndarray, discs: np.ndarray, gated: bool = True) -> np.ndarray:
    s = sigmoid(g)
    if not gated:
        return s
    a = np.where(np.asarray(discs) == 1, 0.5 + 0.5 * s, 0.5 * s)
    # 0.5 * sigmoid rounds to exactly 0.5 for very large logits, which would leave the discharge
    # half. Keep it strictly below.
    return np.where((np.asarray(discs) == 0) & (a >= 0.5), np.nextafter(0.5, 0.0), a)


def map_actions_grad(g: np.ndarray, gated: bool = True) -> np.ndarray:
    """d a / d g, identical for both gates."""
    s = sigmoid(g)
    ds = s * (1.0 - s)
    return ds if not gated else 0.5 * ds


def optimal_power(a: ArrayLike, p_min_kw: ArrayLike, p_max_kw: ArrayLike) -> tp.Any:
    """Affine map of `a` in [0, 1] onto [p_min, p_max]."""
    return a * (p_max_kw - p_min_kw) + p_min_kw


def _urgency(delta_soc: ArrayLike, delta_t: ArrayLike) -> tp.Any:
    return np.sqrt(np.maximum(delta_soc, 0.0) / delta_t)


def uncertainty_factors(
    a: np.ndarray, delta_soc: np.ndarray, delta_t: np.ndarray, epsilon: float
) -> np.ndarray:
    return np.abs(np.log2(a + epsilon)) * _urgency(delta_soc, delta_t)


def uncertainty_factors_grad(
    a: np.ndarray, delta_soc: np.ndarray, delta_t: np.ndarray, epsilon: float
) -> np.ndarray:
    """d factor / d a."""
    shifted = a + epsilon
    return np.sign(np.log2(shifted)) / (shifted * math.log(2.0)) * _urgency(delta_soc, delta_t)


def uncertainty_factor(a: float, u: UncertaintyInputs) -> float:
    """`|log2(a + eps)| * sqrt(max(delta_soc, 0) / delta_t)`.

    Low actions (deep discharge) score high when the target is far and departure near.
    """
    return float(
        uncertainty_factors(np.array([a]), np.array([u.delta_soc]), np.array([u.delta_t]), u.epsilon)[0]
    )


def augment_multiplier(factor: ArrayLike, rho: float, clamp: bool = False) -> tp.Any:
    mult = 1.0 - rho * np.asarray(factor, dtype=np.float64)
    return np.maximum(mult, 0.0) if clamp else mult


def augment_q(q: float, a: float, u: UncertaintyInputs, clamp: bool = False) -> float:
    """The critic value scaled by `1 - rho * factor`. Only the actor update sees this value."""
    return float(q * augment_multiplier(uncertainty_factor(a, u), u.rho, clamp))


def low_reward(
    p_opt_kw: float, price: float, soc_now: float, soc_dep_expected: float, omega: float
) -> float:
    """Price-weighted power plus the distance of the post-slot SoC from the target."""
    return omega * (-p_opt_kw * price) - abs(soc_now - soc_dep_expected)
