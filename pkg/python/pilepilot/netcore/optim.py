"""Adam, the optimizer every agent network trains with."""

import dataclasses
import typing as tp

import numpy as np

from ..errors import NumericalFault, ShapeError
from .mlp import Mlp


@dataclasses.dataclass(eq=False)
class OptimizerState:
    """Bias-corrected adaptive-moment state for one network."""

    learning_rate: float
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def copy(self) -> "OptimizerState":
        return dataclasses.replace(
            self,
            first_moment=self.first_moment.copy(),
            second_moment=self.second_moment.copy(),
        )


def init_optimizer(net: Mlp, learning_rate: float, **kwargs: tp.Any) -> OptimizerState:
    """Zero moments sized to `net`."""
    return OptimizerState(
        learning_rate=learning_rate,
        first_moment=np.zeros_like(net.params),
        second_moment=np.zeros_like(net.params),
        **kwargs,
    )


def optimizer_step(
    opt: OptimizerState, net: Mlp, grad: tp.Any
) -> tp.Tuple[Mlp, OptimizerState]:
    """One descent step along `grad`. Neither input is modified.

    Raises:
        ShapeError: `grad` isn't sized like the parameters.
        NumericalFault: `grad` holds a NaN or infinity.
    """
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != net.params.shape:
        raise ShapeError(
            "Gradient shape {} doesn't match parameters {}.".format(grad.shape, net.params.shape)
        )
    if not np.all(np.isfinite(grad)):
        raise NumericalFault("Non-finite gradient.")

    step_count = opt.step_count + 1
    m = opt.beta1 * opt.first_moment + (1.0 - opt.beta1) * grad
    v = opt.beta2 * opt.second_moment + (1.0 - opt.beta2) * grad * grad
    m_hat = m / (1.0 - opt.beta1**step_count)
    v_hat = v / (1.0 - opt.beta2**step_count)
    params = net.params - opt.learning_rate * m_hat / (np.sqrt(v_hat) + opt.eps)

    new_opt = dataclasses.replace(opt, first_moment=m, second_moment=v, step_count=step_count)
    return Mlp(net.layers, params), new_opt
