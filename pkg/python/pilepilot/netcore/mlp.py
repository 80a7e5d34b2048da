"""Fixed-shape multilayer perceptrons over a flat parameter vector.

Parameters are laid out layer by layer, each layer's weight matrix (out x in, row-major)
followed by its bias vector. Inputs may be a single vector `(in,)` or a batch `(B, in)`.
"""

import dataclasses
import typing as tp

import numpy as np

from ..errors import NumericalFault, ShapeError

Activation = tp.Literal["relu", "tanh", "sigmoid", "linear"]
ACTIVATIONS: tp.Tuple[str, ...] = ("relu", "tanh", "sigmoid", "linear")


@dataclasses.dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: Activation = "linear"

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise ShapeError("Layer dims must be >= 1, got {}x{}.".format(self.in_dim, self.out_dim))
        if self.activation not in ACTIVATIONS:
            raise ShapeError("Unknown activation {!r}.".format(self.activation))

    @property
    def n_params(self) -> int:
        return self.in_dim * self.out_dim + self.out_dim


@dataclasses.dataclass(eq=False)
class Mlp:
    layers: tp.Tuple[LayerSpec, ...]
    params: np.ndarray

    def __post_init__(self):
        self.layers = tuple(self.layers)
        self.params = np.asarray(self.params, dtype=np.float64)
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if prev.out_dim != nxt.in_dim:
                raise ShapeError("Layer output {} feeds input {}.".format(prev.out_dim, nxt.in_dim))
        expected = sum(layer.n_params for layer in self.layers)
        if self.params.shape != (expected,):
            raise ShapeError(
                "Expected {} parameters, got shape {}.".format(expected, self.params.shape)
            )
        if not np.isfinite(self.params).all():
            raise NumericalFault("Network parameters hold a NaN or infinity.")

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    def copy(self) -> "Mlp":
        return Mlp(self.layers, self.params.copy())

    def unpack(self) -> tp.List[tp.Tuple[np.ndarray, np.ndarray]]:
        """(W, b) views into `params`, one pair per layer."""
        out = []
        offset = 0
        for layer in self.layers:
            w_size = layer.in_dim * layer.out_dim
            w = self.params[offset : offset + w_size].reshape(layer.out_dim, layer.in_dim)
            b = self.params[offset + w_size : offset + layer.n_params]
            out.append((w, b))
            offset += layer.n_params
        return out


def mlp_spec(
    in_dim: int,
    out_dim: int,
    hidden: tp.Sequence[int] = (64, 64),
    hidden_activation: Activation = "relu",
    out_activation: Activation = "linear",
) -> tp.Tuple[LayerSpec, ...]:
    dims = [in_dim, *hidden, out_dim]
    return tuple(
        LayerSpec(d_in, d_out, hidden_activation if i < len(dims) - 2 else out_activation)
        for i, (d_in, d_out) in enumerate(zip(dims, dims[1:]))
    )


def init_mlp(layers: tp.Sequence[LayerSpec], rng: np.random.Generator) -> Mlp:
    """Weights and biases uniform in +-1/sqrt(fan_in), layer by layer."""
    chunks = []
    for layer in layers:
        bound = 1.0 / np.sqrt(layer.in_dim)
        chunks.append(rng.uniform(-bound, bound, size=layer.n_params))
    return Mlp(tuple(layers), np.concatenate(chunks))


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    if activation == "tanh":
        return np.tanh(z)
    if activation == "sigmoid":
        return sigmoid(z)
    return z


def _activation_grad(z: np.ndarray, a: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (z > 0).astype(np.float64)
    if activation == "tanh":
        return 1.0 - a * a
    if activation == "sigmoid":
        return a * (1.0 - a)
    return np.ones_like(z)


def sigmoid(z: tp.Union[float, np.ndarray]) -> tp.Any:
    """Logistic function, computed through tanh to stay finite for large |z|."""
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=np.float64)))


def _as_batch(net: Mlp, x: tp.Any) -> tp.Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != net.in_dim:
        raise ShapeError("Expected input with last dim {}, got shape {}.".format(net.in_dim, np.shape(x)))
    return arr, single


def _forward_trace(net: Mlp, x: np.ndarray) -> tp.List[tp.Tuple[np.ndarray, np.ndarray]]:
    """(pre-activation, activation) per layer, the input first as (x, x)."""
    trace = [(x, x)]
    a = x
    for layer, (w, b) in zip(net.layers, net.unpack()):
        z = a @ w.T + b
        a = _activate(z, layer.activation)
        trace.append((z, a))
    return trace


def forward(net: Mlp, x: tp.Any) -> np.ndarray:
    """Evaluate the network on a vector or a batch of row vectors."""
    batch, single = _as_batch(net, x)
    out = _forward_trace(net, batch)[-1][1]
    return out[0] if single else out


def backward(net: Mlp, x: tp.Any, upstream: tp.Any) -> tp.Tuple[np.ndarray, np.ndarray]:
    """Reverse-mode gradient of `sum(upstream * forward(net, x))`.

    Returns:
        The gradient with respect to `params` (summed over the batch) and with respect to `x`
        (same shape as `x`).
    """
    batch, single = _as_batch(net, x)
    grad_out = np.asarray(upstream, dtype=np.float64)
    if single:
        grad_out = grad_out[None, :] if grad_out.ndim == 1 else grad_out
    if grad_out.shape != (batch.shape[0], net.out_dim):
        raise ShapeError(
            "Upstream gradient shape {} doesn't match output shape {}.".format(
                np.shape(upstream), (batch.shape[0], net.out_dim)
            )
        )

    trace = _forward_trace(net, batch)
    weights = net.unpack()
    grads: tp.List[np.ndarray] = []
    delta = grad_out
    for i in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[i]
        z, a = trace[i + 1]
        a_prev = trace[i][1]
        w, _ = weights[i]
        dz = delta * _activation_grad(z, a, layer.activation)
        grads.append(dz.sum(axis=0))
        grads.append((dz.T @ a_prev).ravel())
        delta = dz @ w

    grad_params = np.concatenate(grads[::-1])
    return grad_params, (delta[0] if single else delta)


def finite_difference_grad(
    net: Mlp, x: tp.Any, upstream: tp.Any, h: float = 1e-5
) -> tp.Tuple[np.ndarray, np.ndarray]:
    """Central-difference estimate of what `backward` returns."""
    up = np.asarray(upstream, dtype=np.float64)

    def objective(params: np.ndarray, inputs: np.ndarray) -> float:
        return float(np.sum(up * forward(Mlp(net.layers, params), inputs)))

    params = net.params.copy()
    grad_params = np.zeros_like(params)
    for k in range(params.size):
        orig = params[k]
        params[k] = orig + h
        plus = objective(params, x)
        params[k] = orig - h
        minus = objective(params, x)
        params[k] = orig
        grad_params[k] = (plus - minus) / (2.0 * h)

    inputs = np.array(x, dtype=np.float64)
    grad_x = np.zeros_like(inputs)
    flat = inputs.reshape(-1)
    grad_flat = grad_x.reshape(-1)
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + h
        plus = objective(params, inputs)
        flat[k] = orig - h
        minus = objective(params, inputs)
        flat[k] = orig
        grad_flat[k] = (plus - minus) / (2.0 * h)
    return grad_params, grad_x


def soft_update(target: Mlp, online: Mlp, tau: float) -> Mlp:
    """Blend `online` into `target`: tau * online + (1 - tau) * target."""
    if target.layers != online.layers:
        raise ShapeError("Target and online networks have different layer specs.")
    return Mlp(target.layers, tau * online.params + (1.0 - tau) * target.params)
