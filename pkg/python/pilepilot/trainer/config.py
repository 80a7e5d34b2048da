"""Training hyperparameters and the structural switches of ablations and baselines."""

import dataclasses
import typing as tp

from ..errors import ConfigError
from ..simenv import SCENARIOS, Scenario

Ablation = tp.Literal["full", "no_critic_aug", "no_high", "no_either"]
ABLATIONS: tp.Tuple[str, ...] = ("full", "no_critic_aug", "no_high", "no_either")

Baseline = tp.Literal["none", "ddpg"]
BASELINES: tp.Tuple[str, ...] = ("none", "ddpg")

UpdateCadence = tp.Literal["episode", "slot"]
UPDATE_CADENCES: tp.Tuple[str, ...] = ("episode", "slot")


@dataclasses.dataclass(frozen=True)
class TrainConfig:
    episodes: int = 1500
    buffer_capacity: int = 30000
    batch_size: int = 1024
    gamma: float = 0.99
    tau: float = 0.005
    kappa: float = 0.1
    phi: float = 0.1
    omega: float = 0.5
    rho: float = 10.0
    epsilon: float = 1e-6
    seed: int = 0
    ablation: Ablation = "full"
    scenario: Scenario = "certain"
    baseline: Baseline = "none"
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    hidden_units: int = 64
    hidden_layers: int = 2
    high_sigma_start: float = 0.3
    high_sigma_end: float = 0.02
    low_sigma_start: float = 0.5
    low_sigma_end: float = 0.05
    price_window_hours: int = 3
    high_reward_scale: float = 0.01
    clamp_augmentation: bool = False
    update_cadence: UpdateCadence = "episode"
    checkpoint_every: int = 0
    # 0 cycles through every whole day of the traces.
    train_days: int = 0

    def __post_init__(self):
        if self.episodes < 0:
            raise ConfigError("[episodes]: Must be non-negative.")
        if self.batch_size < 1:
            raise ConfigError("[batch_size]: Must be at least 1.")
        if self.batch_size > self.buffer_capacity:
            raise ConfigError("[batch_size]: Must not exceed buffer_capacity.")
        if not 0 <= self.gamma < 1:
            raise ConfigError("[gamma]: Must lie in [0, 1).")
        if not 0 <= self.tau <= 1:
            raise ConfigError("[tau]: Must lie in [0, 1].")
        if not 0 <= self.kappa <= 1:
            raise ConfigError("[kappa]: Must lie in [0, 1].")
        if self.rho < 0:
            raise ConfigError("[rho]: Must be non-negative.")
        if not self.epsilon > 0:
            raise ConfigError("[epsilon]: Must be positive.")
        if self.ablation not in ABLATIONS:
            raise ConfigError("[ablation]: Expected one of {}.".format(list(ABLATIONS)))
        if self.scenario not in SCENARIOS:
            raise ConfigError("[scenario]: Expected one of {}.".format(list(SCENARIOS)))
        if self.baseline not in BASELINES:
            raise ConfigError("[baseline]: Expected one of {}.".format(list(BASELINES)))
        if self.update_cadence not in UPDATE_CADENCES:
            raise ConfigError("[update_cadence]: Expected one of {}.".format(list(UPDATE_CADENCES)))
        if self.hidden_units < 1 or self.hidden_layers < 1:
            raise ConfigError("[hidden_units]: Networks need at least one hidden unit and layer.")
        if self.price_window_hours < 1:
            raise ConfigError("[price_window_hours]: Must be at least 1.")
        if self.checkpoint_every < 0:
            raise ConfigError("[checkpoint_every]: Must be non-negative.")
        if self.train_days < 0:
            raise ConfigError("[train_days]: Must be non-negative.")

    @property
    def hidden(self) -> tp.Tuple[int, ...]:
        return (self.hidden_units,) * self.hidden_layers

    @property
    def high_enabled(self) -> bool:
        """Whether the high-level agent acts and trains."""
        return self.baseline == "none" and self.ablation in ("full", "no_critic_aug")

    @property
    def gated(self) -> bool:
        """Whether low-level actions are confined to the half the high-level action allows."""
        return self.high_enabled

    @property
    def rho_effective(self) -> float:
        if self.baseline != "none" or self.ablation in ("no_critic_aug", "no_either"):
            return 0.0
        return self.rho
