"""The outer training loop: rollouts, warm-up gated updates and soft target syncs."""

import dataclasses
import json
import logging
import math
import os
import pathlib
import typing as tp

import numpy as np
import pandas as pd

from ..errors import ConfigError, NumericalFault, TrainingAborted
from ..hicontrol import HighTransition, StateScaler, linear_sigma, update_high
from ..locontrol import LowTransition, stack_low_batch, update_low
from ..simenv import PenaltyConfig, Station, StationConfig, Traces, sample_ev_sessions
from .buffer import ReplayBuffer, sample_minibatch
from .config import TrainConfig
from .controller import Agents, Controller, init_agents
from .rollout import Episode, run_episode
from .store import save_agents

logger = logging.getLogger(__name__)

__all__ = ["Agents", "LogRecord", "TrainLog", "TrainResult", "Trainer", "train"]


@dataclasses.dataclass(frozen=True)
class LogRecord:
    episode: int
    day: int
    high_reward: float
    mean_low_reward: float
    energy_cost: float
    peak_load_kw: float
    sigma_high: float
    sigma_low: float
    high_critic_loss: float
    high_actor_objective: float
    low_critic_loss: float
    low_actor_objective: float
    high_updates: int
    low_updates: int
    n_high_transitions: int
    n_low_transitions: int
    clamp_faults: int
    gated: bool
    rho_effective: float
    high_enabled: bool


class TrainLog:
    """One `LogRecord` per finished episode."""

    def __init__(self, records: tp.Optional[tp.Iterable[LogRecord]] = None):
        self.records: tp.List[LogRecord] = list(records or [])

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: LogRecord) -> None:
        self.records.append(record)

    def copy(self) -> "TrainLog":
        return TrainLog(self.records)

    @property
    def total_updates(self) -> int:
        return sum(r.high_updates + r.low_updates for r in self.records)

    def to_frame(self) -> pd.DataFrame:
        columns = [field.name for field in dataclasses.fields(LogRecord)]
        return pd.DataFrame([dataclasses.astuple(r) for r in self.records], columns=columns)

    def summary(self) -> tp.Dict[str, tp.Any]:
        def mean(values: tp.List[float]) -> tp.Optional[float]:
            return math.fsum(values) / len(values) if values else None

        head = self.records[:50]
        tail = self.records[-50:]
        return {
            "episodes": len(self.records),
            "total_updates": self.total_updates,
            "first_50_mean_energy_cost": mean([r.energy_cost for r in head]),
            "last_50_mean_energy_cost": mean([r.energy_cost for r in tail]),
            "last_50_mean_high_reward": mean([r.high_reward for r in tail]),
            "last_50_mean_low_reward": mean([r.mean_low_reward for r in tail]),
        }

    def write(self, csv_path: tp.Union[str, "os.PathLike[str]"]) -> None:
        """Write the per-episode CSV and a JSON summary next to it."""
        csv_path = pathlib.Path(csv_path)
        self.to_frame().to_csv(csv_path, index=False)
        with open(csv_path.with_suffix(".json"), "w") as file:
            json.dump(self.summary(), file, indent=2, sort_keys=True)


@dataclasses.dataclass(eq=False)
class TrainResult:
    agents: Agents
    log: TrainLog


@dataclasses.dataclass(frozen=True)
class _UpdateStats:
    high_critic_loss: float = math.nan
    high_actor_objective: float = math.nan
    low_critic_loss: float = math.nan
    low_actor_objective: float = math.nan
    high_updates: int = 0
    low_updates: int = 0

    def merge(self, other: "_UpdateStats") -> "_UpdateStats":
        def latest(a: float, b: float) -> float:
            return a if math.isnan(b) else b

        return _UpdateStats(
            high_critic_loss=latest(self.high_critic_loss, other.high_critic_loss),
            high_actor_objective=latest(self.high_actor_objective, other.high_actor_objective),
            low_critic_loss=latest(self.low_critic_loss, other.low_critic_loss),
            low_actor_objective=latest(self.low_actor_objective, other.low_actor_objective),
            high_updates=self.high_updates + other.high_updates,
            low_updates=self.low_updates + other.low_updates,
        )


class Trainer:
    """Holds the networks, buffers and the single random stream of one training run."""

    def __init__(
        self,
        cfg: TrainConfig,
        station_cfg: StationConfig,
        penalty_cfg: PenaltyConfig,
        traces: Traces,
    ):
        n_days = cfg.train_days or traces.n_days
        if traces.n_days < 1:
            raise ConfigError("[root]: The traces don't cover a single whole day.")
        if n_days > traces.n_days:
            raise ConfigError(
                "[train_days]: {} requested, the traces cover {}.".format(n_days, traces.n_days)
            )
        self.cfg = cfg
        self.station_cfg = station_cfg
        self.penalty_cfg = penalty_cfg
        self.n_days = n_days
        self.rng = np.random.default_rng(cfg.seed)
        self.agents = init_agents(cfg, station_cfg.n_piles, self.rng)
        self.scaler = StateScaler.for_station(station_cfg, penalty_cfg, traces)
        self.station = Station(station_cfg, traces)
        self.controller = Controller(self.agents, cfg, station_cfg, traces, self.scaler)
        self.high_buffer: ReplayBuffer[HighTransition] = ReplayBuffer(cfg.buffer_capacity)
        self.low_buffer: ReplayBuffer[LowTransition] = ReplayBuffer(cfg.buffer_capacity)
        self.log = TrainLog()

    def update(self) -> _UpdateStats:
        """One step per network for every tier whose buffer holds a full batch."""
        cfg = self.cfg
        stats = _UpdateStats()

        if cfg.high_enabled and len(self.high_buffer) >= cfg.batch_size:
            batch = sample_minibatch(self.high_buffer, cfg.batch_size, self.rng)
            high = update_high(batch, self.agents.high, self.scaler, cfg.gamma)
            self.agents.high.soft_sync(cfg.tau)
            stats = dataclasses.replace(
                stats,
                high_critic_loss=high.critic_loss,
                high_actor_objective=high.actor_objective,
                high_updates=1,
            )
        elif cfg.high_enabled:
            logger.debug(
                "High-level buffer warming up (%d/%d).", len(self.high_buffer), cfg.batch_size
            )

        if len(self.low_buffer) >= cfg.batch_size:
            batch = stack_low_batch(
                sample_minibatch(self.low_buffer, cfg.batch_size, self.rng), self.scaler
            )
            updates = [
                update_low(
                    i,
                    batch,
                    self.agents.low,
                    self.scaler,
                    cfg.gamma,
                    cfg.rho_effective,
                    cfg.epsilon,
                    cfg.gated,
                    cfg.clamp_augmentation,
                )
                for i in range(len(self.agents.low))
            ]
            for agent in self.agents.low:
                agent.soft_sync(cfg.tau)
            trained = [u for u in updates if u.n_rows]
            stats = dataclasses.replace(
                stats,
                low_critic_loss=(
                    math.fsum(u.critic_loss for u in trained) / len(trained) if trained else math.nan
                ),
                low_actor_objective=(
                    math.fsum(u.actor_objective for u in trained) / len(trained)
                    if trained
                    else math.nan
                ),
                low_updates=len(trained),
            )
        else:
            logger.debug("Low-level buffer warming up (%d/%d).", len(self.low_buffer), cfg.batch_size)
        return stats

    def run_one(self, episode_index: int) -> LogRecord:
        cfg = self.cfg
        day = episode_index % self.n_days
        sessions = sample_ev_sessions(
            self.rng,
            day,
            cfg.scenario,
            self.station_cfg.n_piles,
            day_start=self.station.traces.day_start(day),
        )
        sigma_high = linear_sigma(episode_index, cfg.episodes, cfg.high_sigma_start, cfg.high_sigma_end)
        sigma_low = linear_sigma(episode_index, cfg.episodes, cfg.low_sigma_start, cfg.low_sigma_end)

        seen = {"high": 0, "low": 0}
        stats = _UpdateStats()

        def on_slot(episode: Episode) -> None:
            nonlocal stats
            self.high_buffer.extend(episode.high[seen["high"] :])
            self.low_buffer.extend(episode.low[seen["low"] :])
            seen["high"], seen["low"] = len(episode.high), len(episode.low)
            if cfg.update_cadence == "slot":
                stats = stats.merge(self.update())

        episode = run_episode(
            self.station,
            self.controller,
            cfg,
            self.penalty_cfg,
            day,
            sessions,
            self.rng,
            sigma_high,
            sigma_low,
            on_slot=on_slot,
        )
        if cfg.update_cadence == "episode":
            stats = self.update()

        summary = episode.summary
        return LogRecord(
            episode=episode_index,
            day=day,
            high_reward=summary.high_reward,
            mean_low_reward=summary.mean_low_reward,
            energy_cost=summary.energy_cost,
            peak_load_kw=summary.peak_load_kw,
            sigma_high=sigma_high,
            sigma_low=sigma_low,
            high_critic_loss=stats.high_critic_loss,
            high_actor_objective=stats.high_actor_objective,
            low_critic_loss=stats.low_critic_loss,
            low_actor_objective=stats.low_actor_objective,
            high_updates=stats.high_updates,
            low_updates=stats.low_updates,
            n_high_transitions=summary.n_high_transitions,
            n_low_transitions=summary.n_low_transitions,
            clamp_faults=summary.clamp_faults,
            gated=cfg.gated,
            rho_effective=cfg.rho_effective,
            high_enabled=cfg.high_enabled,
        )

    def train(
        self, checkpoint_dir: tp.Optional[tp.Union[str, "os.PathLike[str]"]] = None
    ) -> TrainResult:
        """Run every configured episode.

        Raises:
            TrainingAborted: a numerical fault, carrying the agents and log of the last good
                episode.
        """
        cfg = self.cfg
        for e in range(cfg.episodes):
            last_good = self.agents.copy()
            try:
                record = self.run_one(e)
            except NumericalFault as err:
                logger.error("Numerical fault in episode %d: %s", e, err)
                raise TrainingAborted(err, last_good, self.log.copy(), e) from err
            self.log.append(record)
            logger.info(
                "Episode %d/%d (day %d): energy cost %.4f, peak %.1f kW, high reward %.4f, "
                "low reward %.4f, sigma %.3f/%.3f, updates %d/%d.",
                e + 1,
                cfg.episodes,
                record.day,
                record.energy_cost,
                record.peak_load_kw,
                record.high_reward,
                record.mean_low_reward,
                record.sigma_high,
                record.sigma_low,
                record.high_updates,
                record.low_updates,
            )
            if checkpoint_dir is not None and cfg.checkpoint_every and (e + 1) % cfg.checkpoint_every == 0:
                save_agents(pathlib.Path(checkpoint_dir) / "episode_{:05d}".format(e + 1), self.agents)
        return TrainResult(agents=self.agents, log=self.log)


def train(
    cfg: TrainConfig,
    station_cfg: StationConfig,
    penalty_cfg: PenaltyConfig,
    traces: Traces,
    checkpoint_dir: tp.Optional[tp.Union[str, "os.PathLike[str]"]] = None,
) -> TrainResult:
    """Train from scratch. Identical arguments give identical networks and logs."""
    return Trainer(cfg, station_cfg, penalty_cfg, traces).train(checkpoint_dir)
