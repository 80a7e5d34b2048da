"""Rollouts, replay buffers and the two-tier training loop."""

from .buffer import ReplayBuffer, sample_minibatch
from .config import ABLATIONS, BASELINES, UPDATE_CADENCES, Ablation, Baseline, TrainConfig
from .controller import Agents, Controller, Decision, init_agents, mean_low_state
from .loop import LogRecord, TrainLog, Trainer, TrainResult, train
from .rollout import SLOTS_PER_EPISODE, Episode, EpisodeSummary, run_episode
from .store import load_agents, save_agents

__all__ = [
    "ABLATIONS",
    "BASELINES",
    "SLOTS_PER_EPISODE",
    "UPDATE_CADENCES",
    "Ablation",
    "Agents",
    "Baseline",
    "Controller",
    "Decision",
    "Episode",
    "EpisodeSummary",
    "LogRecord",
    "ReplayBuffer",
    "TrainConfig",
    "TrainLog",
    "TrainResult",
    "Trainer",
    "init_agents",
    "load_agents",
    "mean_low_state",
    "run_episode",
    "sample_minibatch",
    "save_agents",
    "train",
]
