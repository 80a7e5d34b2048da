"""JSON checkpoints of networks, optimizers and whole agents.

Floats go through `json` unchanged, which writes the shortest repr that parses back to the same
double, so a save/load round trip is bit exact.
"""

import json
import os
import pathlib
import typing as tp

import numpy as np

from ..errors import CheckpointError, NumericalFault, ShapeError
from .actor_critic import ActorCritic
from .mlp import LayerSpec, Mlp
from .optim import OptimizerState

FORMAT_VERSION = 1

PathLike = tp.Union[str, "os.PathLike[str]"]


def net_to_dict(net: Mlp) -> tp.Dict[str, tp.Any]:
    return {
        "layers": [
            {"in_dim": layer.in_dim, "out_dim": layer.out_dim, "activation": layer.activation}
            for layer in net.layers
        ],
        "params": net.params.tolist(),
    }


def net_from_dict(data: tp.Mapping[str, tp.Any]) -> Mlp:
    try:
        layers = tuple(
            LayerSpec(int(layer["in_dim"]), int(layer["out_dim"]), layer["activation"])
            for layer in data["layers"]
        )
        return Mlp(layers, np.asarray(data["params"], dtype=np.float64))
    except (KeyError, TypeError, ShapeError, NumericalFault) as e:
        raise CheckpointError("Malformed network entry: {}".format(e)) from e


def opt_to_dict(opt: OptimizerState) -> tp.Dict[str, tp.Any]:
    return {
        "learning_rate": opt.learning_rate,
        "first_moment": opt.first_moment.tolist(),
        "second_moment": opt.second_moment.tolist(),
        "step_count": opt.step_count,
        "beta1": opt.beta1,
        "beta2": opt.beta2,
        "eps": opt.eps,
    }


def opt_from_dict(data: tp.Mapping[str, tp.Any]) -> OptimizerState:
    try:
        return OptimizerState(
            learning_rate=float(data["learning_rate"]),
            first_moment=np.asarray(data["first_moment"], dtype=np.float64),
            second_moment=np.asarray(data["second_moment"], dtype=np.float64),
            step_count=int(data["step_count"]),
            beta1=float(data["beta1"]),
            beta2=float(data["beta2"]),
            eps=float(data["eps"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError("Malformed optimizer entry: {}".format(e)) from e


_NETS = ("actor", "critic", "target_actor", "target_critic")
_OPTS = ("actor_opt", "critic_opt")


def agent_to_dict(agent: ActorCritic) -> tp.Dict[str, tp.Any]:
    out: tp.Dict[str, tp.Any] = {"version": FORMAT_VERSION}
    for name in _NETS:
        out[name] = net_to_dict(getattr(agent, name))
    for name in _OPTS:
        out[name] = opt_to_dict(getattr(agent, name))
    return out


def agent_from_dict(data: tp.Mapping[str, tp.Any]) -> ActorCritic:
    if data.get("version") != FORMAT_VERSION:
        raise CheckpointError(
            "Unsupported checkpoint version {!r}, expected {}.".format(
                data.get("version"), FORMAT_VERSION
            )
        )
    missing = [name for name in _NETS + _OPTS if name not in data]
    if missing:
        raise CheckpointError("Checkpoint is missing {}.".format(", ".join(missing)))

    agent = ActorCritic(
        **{name: net_from_dict(data[name]) for name in _NETS},
        **{name: opt_from_dict(data[name]) for name in _OPTS},
    )
    for net_name, opt_name in (("actor", "actor_opt"), ("critic", "critic_opt")):
        net: Mlp = getattr(agent, net_name)
        opt: OptimizerState = getattr(agent, opt_name)
        if opt.first_moment.shape != net.params.shape or opt.second_moment.shape != net.params.shape:
            raise CheckpointError("Optimizer moments of {} don't match its parameters.".format(net_name))
    return agent


def save_checkpoint(path: PathLike, agent: ActorCritic) -> pathlib.Path:
    """Write one agent as a single JSON document."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as file:
        json.dump(agent_to_dict(agent), file, sort_keys=True)
    return path


def load_checkpoint(path: PathLike) -> ActorCritic:
    path = pathlib.Path(path)
    try:
        with open(path, "r") as file:
            data = json.load(file)
    except FileNotFoundError as e:
        raise CheckpointError("No checkpoint at '{}'.".format(path)) from e
    except json.JSONDecodeError as e:
        raise CheckpointError("'{}' isn't valid JSON: {}".format(path, e)) from e
    if not isinstance(data, dict):
        raise CheckpointError("'{}' doesn't hold a checkpoint object.".format(path))
    return agent_from_dict(data)
