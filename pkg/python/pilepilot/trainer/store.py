"""Checkpoint directories: `high.json` plus one `low_<i>.json` per low-level agent."""

import os
import pathlib
import re
import typing as tp

from ..errors import CheckpointError
from ..netcore import load_checkpoint, save_checkpoint
from .controller import Agents

HIGH_FILE = "high.json"
_LOW_FILE = re.compile(r"^low_(\d+)\.json$")


def low_file(index: int) -> str:
    return "low_{}.json".format(index)


def save_agents(directory: tp.Union[str, "os.PathLike[str]"], agents: Agents) -> pathlib.Path:
    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_checkpoint(directory / HIGH_FILE, agents.high)
    for i, agent in enumerate(agents.low):
        save_checkpoint(directory / low_file(i), agent)
    return directory


def load_agents(
    directory: tp.Union[str, "os.PathLike[str]"], n_low: tp.Optional[int] = None
) -> Agents:
    """Read a checkpoint directory, optionally insisting on `n_low` low-level agents."""
    directory = pathlib.Path(directory)
    if not directory.is_dir():
        raise CheckpointError("No checkpoint directory at '{}'.".format(directory))
    indices = sorted(
        int(match.group(1))
        for match in (_LOW_FILE.match(path.name) for path in directory.iterdir())
        if match is not None
    )
    if indices != list(range(len(indices))):
        raise CheckpointError("Low-level checkpoints in '{}' aren't numbered 0..n-1.".format(directory))
    if n_low is not None and len(indices) != n_low:
        raise CheckpointError(
            "'{}' holds {} low-level agents, the configuration needs {}.".format(
                directory, len(indices), n_low
            )
        )
    return Agents(
        high=load_checkpoint(directory / HIGH_FILE),
        low=[load_checkpoint(directory / low_file(i)) for i in indices],
    )
