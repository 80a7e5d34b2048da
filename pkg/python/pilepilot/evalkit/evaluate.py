"""Running a policy over a seeded evaluation horizon."""

import dataclasses
import logging
import typing as tp

import numpy as np

from ..errors import ConfigError
from ..simenv import (
    SCENARIOS,
    EvSession,
    PenaltyConfig,
    Scenario,
    SlotLedger,
    Station,
    StationConfig,
    Traces,
    sample_ev_sessions,
)
from .metrics import MetricsReport, SessionOutcome, build_report, session_outcomes
from .policies import Policy

logger = logging.getLogger(__name__)

SLOTS_PER_DAY = 24
# Keeps the evaluation session stream apart from the training one under the same seed.
_EVAL_STREAM = 1


@dataclasses.dataclass(frozen=True)
class EvalConfig:
    eval_days: int = 14
    # None evaluates the last `eval_days` whole days of the traces.
    start_day: tp.Optional[int] = None
    seed: int = 0
    scenario: Scenario = "certain"

    def __post_init__(self):
        if self.eval_days < 1:
            raise ConfigError("[eval_days]: Must be at least 1.")
        if self.start_day is not None and self.start_day < 0:
            raise ConfigError("[eval_start_day]: Must be non-negative.")
        if self.scenario not in SCENARIOS:
            raise ConfigError("[scenario]: Expected one of {}.".format(list(SCENARIOS)))

    def days(self, traces: Traces) -> range:
        if self.eval_days > traces.n_days:
            raise ConfigError(
                "[eval_days]: {} requested, the traces cover {} whole days.".format(
                    self.eval_days, traces.n_days
                )
            )
        start = traces.n_days - self.eval_days if self.start_day is None else self.start_day
        if start + self.eval_days > traces.n_days:
            raise ConfigError(
                "[eval_start_day]: Days {}..{} run past the traces ({} days).".format(
                    start, start + self.eval_days - 1, traces.n_days
                )
            )
        return range(start, start + self.eval_days)


@dataclasses.dataclass(eq=False)
class EvalResult:
    report: MetricsReport
    ledgers: tp.List[SlotLedger]
    outcomes: tp.List[SessionOutcome]


def evaluation_sessions(
    traces: Traces, station_cfg: StationConfig, eval_cfg: EvalConfig
) -> tp.Dict[int, tp.List[EvSession]]:
    """The sessions of every evaluation day, a pure function of the configuration."""
    rng = np.random.default_rng([eval_cfg.seed, _EVAL_STREAM])
    return {
        day: sample_ev_sessions(
            rng, day, eval_cfg.scenario, station_cfg.n_piles, day_start=traces.day_start(day)
        )
        for day in eval_cfg.days(traces)
    }


def run_evaluation(
    policy: Policy,
    station_cfg: StationConfig,
    penalty_cfg: PenaltyConfig,
    traces: Traces,
    eval_cfg: EvalConfig,
    sessions: tp.Optional[tp.Mapping[int, tp.Sequence[EvSession]]] = None,
) -> EvalResult:
    """Drive `policy` day by day and collect the ledger of the whole horizon."""
    if sessions is None:
        sessions = evaluation_sessions(traces, station_cfg, eval_cfg)
    station = Station(station_cfg, traces)
    # Only the random reference policy draws from this stream.
    rng = np.random.default_rng([eval_cfg.seed, _EVAL_STREAM + 1])

    ledgers: tp.List[SlotLedger] = []
    for day, day_sessions in sessions.items():
        policy.reset()
        state = station.reset(day, day_sessions)
        for _ in range(SLOTS_PER_DAY):
            state, ledger = station.step(state, policy.decide(state, rng))
            policy.observe(ledger)
            ledgers.append(ledger)

    outcomes = session_outcomes(ledgers)
    report = build_report(ledgers, outcomes, penalty_cfg)
    logger.info(
        "Evaluated %s over %d days: total cost %.2f (energy %.2f, penalty %.2f), %d sessions.",
        getattr(policy, "name", type(policy).__name__),
        len(sessions),
        report.total_cost_usd,
        report.energy_cost_usd,
        report.penalty_cost_usd,
        report.n_sessions,
    )
    return EvalResult(report=report, ledgers=ledgers, outcomes=outcomes)


def evaluate(
    policy: Policy,
    station_cfg: StationConfig,
    penalty_cfg: PenaltyConfig,
    traces: Traces,
    eval_cfg: EvalConfig,
    sessions: tp.Optional[tp.Mapping[int, tp.Sequence[EvSession]]] = None,
) -> MetricsReport:
    """Noise-free execution of `policy` over the horizon, reduced to its metrics."""
    return run_evaluation(policy, station_cfg, penalty_cfg, traces, eval_cfg, sessions).report
