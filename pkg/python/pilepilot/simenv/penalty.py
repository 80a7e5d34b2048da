"""Tiered demand charge."""

from ..errors import DomainError
from .types import PenaltyConfig


def excess_load_kw(load_kw: float, contract_kw: float) -> float:
    """Load above the contract capacity, zero when within it."""
    return max(0.0, load_kw - contract_kw)


def penalty_cost(peak_load_kw: float, cfg: PenaltyConfig) -> float:
    """Demand charge (USD) for a billing period whose peak load was `peak_load_kw`.

    The excess over the contract is billed at twice the base rate up to `tier_threshold` of the
    contract, and at three times the base rate beyond it.
    """
    if peak_load_kw < 0:
        raise DomainError("Peak load must be non-negative, got {}.".format(peak_load_kw))
    excess = excess_load_kw(peak_load_kw, cfg.contract_kw)
    cap = cfg.tier_threshold * cfg.contract_kw
    rate = cfg.base_rate_usd_per_kw
    return 2.0 * rate * min(excess, cap) + 3.0 * rate * max(0.0, excess - cap)
