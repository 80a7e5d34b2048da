"""Desk-scale training runs. Minutes each, so only with `--run-slow`."""

import dataclasses
import typing as tp

import numpy as np
import pytest
from pilepilot.cli import generate_synthetic_traces
from pilepilot.config import SyntheticProfile
from pilepilot.evalkit import (
    EvalConfig,
    LearnedPolicy,
    MaxChargePolicy,
    MetricsReport,
    RandomPolicy,
    evaluate,
)
from pilepilot.hicontrol import StateScaler
from pilepilot.simenv import PenaltyConfig, Scenario, StationConfig, Traces
from pilepilot.trainer import Controller, TrainConfig, Trainer

from ..helpers.utils import constant_traces

SEEDS = (0, 1, 2)
EVAL_DAYS = 14
STATION = StationConfig(n_piles=5)
PENALTY = PenaltyConfig()


def desk_config(**kwargs: tp.Any) -> TrainConfig:
    defaults: tp.Dict[str, tp.Any] = {
        "episodes": 200,
        "buffer_capacity": 10000,
        "batch_size": 256,
        "hidden_units": 32,
        "hidden_layers": 2,
    }
    defaults.update(kwargs)
    return TrainConfig(**defaults)


def synthetic(seed: int) -> Traces:
    rng = np.random.default_rng([seed, 3])
    load, price = generate_synthetic_traces(rng, 44, SyntheticProfile())
    return Traces(load=load, price=price)


def train_and_evaluate(cfg: TrainConfig, traces: Traces, scenario: Scenario) -> MetricsReport:
    cfg = dataclasses.replace(cfg, train_days=traces.n_days - EVAL_DAYS)
    result = Trainer(cfg, STATION, PENALTY, traces).train()
    scaler = StateScaler.for_station(STATION, PENALTY, traces)
    policy = LearnedPolicy(Controller(result.agents, cfg, STATION, traces, scaler))
    return evaluate(
        policy, STATION, PENALTY, traces, EvalConfig(EVAL_DAYS, seed=cfg.seed, scenario=scenario)
    )


@pytest.mark.slow
def test_every_stored_action_respects_its_gate():
    trainer = Trainer(desk_config(episodes=50, seed=0), STATION, PENALTY, synthetic(0))
    trainer.train()
    assert len(trainer.low_buffer) > 0
    for transition in trainer.low_buffer:
        for state, action in zip(transition.x.states, transition.actions):
            if not state.docked:
                assert action == 0.5
            elif state.high_action_disc == 1:
                assert 0.5 <= action <= 1.0
            else:
                assert 0.0 <= action < 0.5


@pytest.mark.slow
def test_energy_cost_falls_on_a_constant_day():
    cfg = desk_config(episodes=200, seed=0)
    log = Trainer(cfg, STATION, PENALTY, constant_traces(7, load_kw=300.0, price=0.05)).train().log
    costs = np.array([r.energy_cost for r in log.records])
    assert costs[-50:].mean() <= costs[:50].mean()


@pytest.mark.slow
def test_trained_model_beats_the_baselines():
    wins = 0
    for seed in SEEDS:
        traces = synthetic(seed)
        eval_cfg = EvalConfig(EVAL_DAYS, seed=seed)
        learned = train_and_evaluate(desk_config(seed=seed), traces, "certain")
        rand = evaluate(RandomPolicy(STATION), STATION, PENALTY, traces, eval_cfg)
        greedy = evaluate(MaxChargePolicy(STATION), STATION, PENALTY, traces, eval_cfg)
        print(
            "seed {}: learned {:.2f}, random {:.2f}, max-charge {:.2f}".format(
                seed, learned.total_cost_usd, rand.total_cost_usd, greedy.total_cost_usd
            )
        )
        cost = learned.total_cost_usd
        if cost < rand.total_cost_usd and cost <= greedy.total_cost_usd:
            wins += 1
    assert wins >= 2


@pytest.mark.slow
def test_removing_either_component_raises_the_penalty():
    penalties: tp.Dict[str, tp.List[float]] = {"full": [], "no_critic_aug": [], "no_high": []}
    for seed in SEEDS:
        traces = synthetic(seed)
        for ablation in penalties:
            cfg = desk_config(seed=seed, ablation=ablation, scenario="uncertain")
            report = train_and_evaluate(cfg, traces, "uncertain")
            penalties[ablation].append(report.penalty_cost_usd)
    full = float(np.mean(penalties["full"]))
    for ablation in ("no_critic_aug", "no_high"):
        mean = float(np.mean(penalties[ablation]))
        print("{}: penalty ratio vs full {}".format(ablation, mean / full if full > 0 else "n/a"))
        assert mean >= full


@pytest.mark.slow
def test_larger_rho_trades_fulfillment_for_cost():
    totals: tp.Dict[float, tp.List[float]] = {0.01: [], 10.0: []}
    fulfillment: tp.Dict[float, tp.List[float]] = {0.01: [], 10.0: []}
    for seed in SEEDS:
        traces = synthetic(seed)
        for rho in totals:
            report = train_and_evaluate(desk_config(seed=seed, rho=rho), traces, "uncertain")
            totals[rho].append(report.total_cost_usd)
            fulfillment[rho].append(report.soc_fulfillment_pct)
    assert np.mean(totals[10.0]) <= np.mean(totals[0.01])
    assert np.mean(fulfillment[0.01]) >= np.mean(fulfillment[10.0])
