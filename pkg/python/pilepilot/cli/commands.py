"""The commands behind `pilepilot <command>`.

Every command gets an `Invocation` (resolved config, output directory, command options),
writes its artifacts plus a `manifest.json` into the output directory and returns the exit code.
"""

import dataclasses
import json
import logging
import math
import os
import pathlib
import typing as tp

import numpy as np
import pandas as pd

from ..config import RunConfig, validate_flat
from ..errors import CheckpointError, ConfigError, TrainingAborted
from ..evalkit import (
    LearnedPolicy,
    MaxChargePolicy,
    MetricsReport,
    Policy,
    RandomPolicy,
    evaluation_sessions,
    greedy_oracle,
    metrics_frame,
    run_evaluation,
    write_ledger_csv,
    write_metrics_json,
    write_soc_csv,
)
from ..hicontrol import HIGH_STATE_DIM, LOW_STATE_DIM, StateScaler
from ..simenv import EvSession, Traces
from ..trainer import (
    ABLATIONS,
    Agents,
    Controller,
    TrainConfig,
    Trainer,
    init_agents,
    load_agents,
    save_agents,
)
from .manifest import RunManifest, utc_now
from .traces import TraceDigest, export_trace, generate_synthetic_traces, ingest_traces

logger = logging.getLogger(__name__)

RUN_DIR_ENV = "HUCA_RUN_DIR"
DEFAULT_RUN_DIR = "runs"
FINAL_CHECKPOINT = "final"
LAST_GOOD_CHECKPOINT = "last_good"
DEFAULT_RHOS: tp.Tuple[float, ...] = (0.01, 1.0, 10.0)
# Seeds the synthetic traces apart from the training and evaluation streams.
_TRACE_STREAM = 3


def run_root() -> pathlib.Path:
    return pathlib.Path(os.environ.get(RUN_DIR_ENV) or DEFAULT_RUN_DIR)


@dataclasses.dataclass(frozen=True)
class Invocation:
    command: str
    config: RunConfig
    out_dir: pathlib.Path
    options: tp.Mapping[str, tp.Any] = dataclasses.field(default_factory=dict)


def load_run_traces(cfg: RunConfig, synthetic: bool = False) -> tp.Tuple[Traces, TraceDigest]:
    """The configured CSV traces, or seeded synthetic ones when none are configured."""
    if (cfg.load_csv is None) != (cfg.price_csv is None):
        raise ConfigError("[load_csv]: load_csv and price_csv must be given together.")
    if cfg.load_csv is not None and cfg.price_csv is not None and not synthetic:
        load, price = ingest_traces(cfg.load_csv, cfg.price_csv)
        source = "csv"
    else:
        rng = np.random.default_rng([cfg.train.seed, _TRACE_STREAM])
        load, price = generate_synthetic_traces(rng, cfg.synthetic.days, cfg.synthetic)
        source = "synthetic"
    traces = Traces(load=load, price=price)
    return traces, TraceDigest.of(traces, source)


def training_config(cfg: RunConfig, traces: Traces) -> TrainConfig:
    """Fill in `train_days`: by default every day before the evaluation horizon."""
    if cfg.train.train_days:
        return cfg.train
    first_eval_day = cfg.evaluation.days(traces).start
    if first_eval_day == 0:
        logger.warning("The evaluation horizon starts on day 0, training on every day instead.")
        return dataclasses.replace(cfg.train, train_days=traces.n_days)
    return dataclasses.replace(cfg.train, train_days=first_eval_day)


class _Run:
    """Owns one output directory and its manifest."""

    def __init__(self, inv: Invocation, digest: TraceDigest):
        self.out_dir = inv.out_dir
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.manifest = RunManifest(
            command=inv.command,
            config=inv.config.flat(),
            seed=inv.config.train.seed,
            traces=digest,
            options=dict(inv.options),
        )
        self.manifest.write(self.out_dir)

    def output(self, name: str) -> pathlib.Path:
        if name not in self.manifest.outputs:
            self.manifest.outputs.append(name)
        return self.out_dir / name

    def finish(self) -> None:
        self.manifest.outputs.sort()
        self.manifest.finished_at = utc_now()
        self.manifest.write(self.out_dir)


def _learned_policy(agents: Agents, train_cfg: TrainConfig, cfg: RunConfig, traces: Traces) -> LearnedPolicy:
    scaler = StateScaler.for_station(cfg.station, cfg.penalty, traces)
    return LearnedPolicy(Controller(agents, train_cfg, cfg.station, traces, scaler))


def _evaluate_into(
    run: _Run,
    policy: Policy,
    cfg: RunConfig,
    traces: Traces,
    sessions: tp.Optional[tp.Mapping[int, tp.Sequence[EvSession]]] = None,
) -> MetricsReport:
    result = run_evaluation(policy, cfg.station, cfg.penalty, traces, cfg.evaluation, sessions)
    write_metrics_json(result.report, run.output("metrics.json"))
    write_ledger_csv(result.ledgers, run.output("ledger.csv"))
    write_soc_csv(result.ledgers, run.output("soc.csv"))
    return result.report


def _print_report(report: MetricsReport) -> None:
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))


def _train_run(inv: Invocation, traces: Traces, digest: TraceDigest) -> MetricsReport:
    """Train, checkpoint, then evaluate the final networks noise-free."""
    cfg = inv.config
    run = _Run(inv, digest)
    train_cfg = training_config(cfg, traces)
    checkpoints = run.output("checkpoints")
    logger.info(
        "Training '%s' (%s, baseline %s) for %d episodes over %d days.",
        cfg.name,
        train_cfg.ablation,
        train_cfg.baseline,
        train_cfg.episodes,
        train_cfg.train_days,
    )
    try:
        result = Trainer(train_cfg, cfg.station, cfg.penalty, traces).train(checkpoints)
    except TrainingAborted as e:
        save_agents(checkpoints / LAST_GOOD_CHECKPOINT, e.last_good)
        e.log.write(run.output("logs.csv"))
        run.output("logs.json")
        run.manifest.write(run.out_dir)
        raise

    save_agents(checkpoints / FINAL_CHECKPOINT, result.agents)
    result.log.write(run.output("logs.csv"))
    run.output("logs.json")
    report = _evaluate_into(run, _learned_policy(result.agents, train_cfg, cfg, traces), cfg, traces)
    run.finish()
    return report


def cmd_train(inv: Invocation) -> int:
    traces, digest = load_run_traces(inv.config)
    _print_report(_train_run(inv, traces, digest))
    return 0


def _load_checked_agents(directory: str, cfg: RunConfig) -> Agents:
    n_low = 1 if cfg.train.baseline == "ddpg" else cfg.station.n_piles
    agents = load_agents(directory, n_low=n_low)
    if agents.high.actor.in_dim != HIGH_STATE_DIM:
        raise CheckpointError("'{}' holds a high-level actor of the wrong shape.".format(directory))
    for agent in agents.low:
        if agent.actor.in_dim != LOW_STATE_DIM or agent.critic.in_dim != n_low * (LOW_STATE_DIM + 1):
            raise CheckpointError(
                "'{}' holds low-level networks for a different station size.".format(directory)
            )
    return agents


def cmd_eval(inv: Invocation) -> int:
    """Evaluate a checkpoint (or fresh networks) or one of the reference policies."""
    cfg = inv.config
    traces, digest = load_run_traces(cfg)
    run = _Run(inv, digest)

    name = inv.options.get("policy", "learned")
    policy: Policy
    if name == "learned":
        checkpoint = inv.options.get("checkpoint")
        if checkpoint is not None:
            agents = _load_checked_agents(checkpoint, cfg)
        else:
            logger.warning("No checkpoint given, evaluating freshly initialised networks.")
            agents = init_agents(cfg.train, cfg.station.n_piles, np.random.default_rng(cfg.train.seed))
        policy = _learned_policy(agents, cfg.train, cfg, traces)
    elif name == "max-charge":
        policy = MaxChargePolicy(cfg.station)
    elif name == "random":
        policy = RandomPolicy(cfg.station)
    else:
        raise ConfigError("[policy]: Unknown policy '{}'.".format(name))

    report = _evaluate_into(run, policy, cfg, traces)
    run.finish()
    _print_report(report)
    return 0


def _sweep(
    inv: Invocation,
    variants: tp.Mapping[str, RunConfig],
    label: str,
    table: str,
    extend: tp.Callable[[pd.DataFrame], None],
) -> pd.DataFrame:
    """Train and evaluate every variant in its own subdirectory, tabulating the reports."""
    traces, digest = load_run_traces(inv.config)
    run = _Run(inv, digest)
    reports: tp.Dict[str, MetricsReport] = {}
    for key, variant in variants.items():
        sub = Invocation(command="train", config=variant, out_dir=run.output(key))
        reports[key] = _train_run(sub, traces, digest)
    frame = metrics_frame(reports, label=label)
    extend(frame)
    frame.to_csv(run.output(table), index=False)
    run.finish()
    print(frame.to_string(index=False))
    return frame


def cmd_ablate(inv: Invocation) -> int:
    """The full model and its three ablations under one seed."""
    cfg = inv.config
    variants = {
        ablation: dataclasses.replace(cfg, train=dataclasses.replace(cfg.train, ablation=ablation))
        for ablation in ABLATIONS
    }

    def penalty_ratio(frame: pd.DataFrame) -> None:
        full = float(frame.loc[frame["ablation"] == "full", "penalty_cost_usd"].iloc[0])
        frame["penalty_ratio_vs_full"] = [
            p / full if full > 0 else math.nan for p in frame["penalty_cost_usd"]
        ]

    _sweep(inv, variants, label="ablation", table="ablation.csv", extend=penalty_ratio)
    return 0


def cmd_rho_sweep(inv: Invocation) -> int:
    """Train and evaluate the full model across augmentation weights."""
    cfg = inv.config
    rhos = list(dict.fromkeys(float(r) for r in inv.options.get("rhos", DEFAULT_RHOS)))
    variants = {
        "rho_{:g}".format(rho): dataclasses.replace(cfg, train=dataclasses.replace(cfg.train, rho=rho))
        for rho in rhos
    }

    def rho_column(frame: pd.DataFrame) -> None:
        frame.insert(1, "rho", rhos)

    _sweep(inv, variants, label="variant", table="rho.csv", extend=rho_column)
    return 0


def cmd_oracle(inv: Invocation) -> int:
    """The price-greedy schedule on the evaluation sessions, and its metrics."""
    cfg = inv.config
    traces, digest = load_run_traces(cfg)
    run = _Run(inv, digest)
    sessions = evaluation_sessions(traces, cfg.station, cfg.evaluation)
    result = greedy_oracle(sessions, traces, cfg.station, cfg.penalty)

    rows = []
    for day, plan in result.schedule.items():
        start = traces.day_start(day)
        for k in range(plan.shape[0]):
            rows.append([day, start + k, *plan[k].tolist()])
    columns = ["day", "slot"] + ["pile_{}_power".format(i) for i in range(cfg.station.n_piles)]
    pd.DataFrame(rows, columns=columns).to_csv(run.output("schedule.csv"), index=False)
    write_metrics_json(result.report, run.output("metrics.json"))
    write_ledger_csv(result.ledgers, run.output("ledger.csv"))
    write_soc_csv(result.ledgers, run.output("soc.csv"))
    run.finish()
    _print_report(result.report)
    return 0


def cmd_gen_traces(inv: Invocation) -> int:
    """Write `load.csv` and `price.csv` from the synthetic profile."""
    traces, digest = load_run_traces(inv.config, synthetic=True)
    run = _Run(inv, digest)
    export_trace(traces.load, run.output("load.csv"))
    export_trace(traces.price, run.output("price.csv"))
    run.finish()
    print("Wrote {} hours of traces to '{}'.".format(len(traces.load), run.out_dir))
    return 0


COMMANDS: tp.Dict[str, tp.Callable[[Invocation], int]] = {
    "train": cmd_train,
    "eval": cmd_eval,
    "ablate": cmd_ablate,
    "oracle": cmd_oracle,
    "gen-traces": cmd_gen_traces,
    "rho-sweep": cmd_rho_sweep,
}


def rerun_invocation(manifest_path: tp.Union[str, "os.PathLike[str]"], out_dir: pathlib.Path) -> Invocation:
    """Rebuild an invocation from a manifest, checking its traces are still the same."""
    manifest = RunManifest.read(manifest_path)
    if manifest.command not in COMMANDS:
        raise ConfigError("[command]: Unknown command '{}' in the manifest.".format(manifest.command))
    validate_flat(manifest.config)
    cfg = RunConfig.from_flat(manifest.config)
    _, digest = load_run_traces(cfg, synthetic=manifest.traces.source == "synthetic")
    if (digest.load_hash, digest.price_hash) != (manifest.traces.load_hash, manifest.traces.price_hash):
        raise ConfigError(
            "[root]: The traces changed since the run (load {} vs {}, price {} vs {}).".format(
                digest.load_hash[:12],
                manifest.traces.load_hash[:12],
                digest.price_hash[:12],
                manifest.traces.price_hash[:12],
            )
        )
    return Invocation(
        command=manifest.command, config=cfg, out_dir=out_dir, options=dict(manifest.options)
    )
