import json

import numpy as np
import pytest
from pilepilot.errors import CheckpointError
from pilepilot.netcore import (
    agent_to_dict,
    init_actor_critic,
    load_checkpoint,
    optimizer_step,
    save_checkpoint,
)

from ..helpers.tmp_file_manager import TmpFileManager


def _trained_agent():
    rng = np.random.default_rng(4)
    agent = init_actor_critic(6, 7, rng, hidden=(8,))
    agent.critic, agent.critic_opt = optimizer_step(
        agent.critic_opt, agent.critic, rng.normal(size=agent.critic.params.shape)
    )
    agent.soft_sync(0.5)
    return agent


def test_checkpoint_round_trip_is_exact():
    agent = _trained_agent()
    with TmpFileManager() as manager:
        path = save_checkpoint(manager.tmpdir() / "nested" / "agent.json", agent)
        loaded = load_checkpoint(path)
    for name in ("actor", "critic", "target_actor", "target_critic"):
        assert getattr(loaded, name).layers == getattr(agent, name).layers
        assert np.array_equal(getattr(loaded, name).params, getattr(agent, name).params)
    assert loaded.critic_opt.step_count == 1
    assert np.array_equal(loaded.critic_opt.second_moment, agent.critic_opt.second_moment)
    assert loaded.actor_opt.learning_rate == agent.actor_opt.learning_rate


def test_targets_start_as_copies():
    agent = init_actor_critic(3, 4, np.random.default_rng(0), hidden=(5,))
    assert np.array_equal(agent.actor.params, agent.target_actor.params)
    assert agent.actor.params is not agent.target_actor.params


def test_missing_checkpoint():
    with TmpFileManager() as manager:
        with pytest.raises(CheckpointError, match="No checkpoint at"):
            load_checkpoint(manager.tmpdir() / "absent.json")


def test_invalid_json():
    with TmpFileManager() as manager:
        path = manager.tmpfile("{not json", suffix=".json")
        with pytest.raises(CheckpointError, match="isn't valid JSON"):
            load_checkpoint(path)


@pytest.mark.parametrize(
    "mutate, match",
    [
        (lambda d: d.update(version=99), "Unsupported checkpoint version 99"),
        (lambda d: d.pop("critic_opt"), "missing critic_opt"),
        (lambda d: d["actor"].update(params=[0.0]), "Malformed network entry"),
        (
            lambda d: d["critic"].update(params=[float("nan")] * len(d["critic"]["params"])),
            "Malformed network entry: Network parameters hold a NaN",
        ),
        (lambda d: d["actor_opt"].update(first_moment=[0.0]), "Optimizer moments of actor"),
    ],
)
def test_corrupt_checkpoints(mutate, match: str):  # type: ignore
    data = agent_to_dict(_trained_agent())
    mutate(data)
    with TmpFileManager() as manager:
        path = manager.tmpfile(json.dumps(data), suffix=".json")
        with pytest.raises(CheckpointError, match=match):
            load_checkpoint(path)
