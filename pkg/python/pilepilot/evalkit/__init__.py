"""Evaluation: SoC metrics, cost reports, reference policies and the price-greedy oracle."""

from .evaluate import EvalConfig, EvalResult, evaluate, evaluation_sessions, run_evaluation
from .export import (
    ledger_frame,
    metrics_frame,
    soc_frame,
    write_ledger_csv,
    write_metrics_csv,
    write_metrics_json,
    write_soc_csv,
)
from .metrics import (
    MetricsReport,
    SessionOutcome,
    build_report,
    midpoint_slot,
    session_outcomes,
    soc_fulfillment,
    soc_maintenance,
    user_satisfaction,
)
from .oracle import (
    OracleResult,
    energy_floors,
    greedy_oracle,
    plan_session,
    required_energy_kwh,
    schedule_energy_cost,
)
from .policies import POLICY_NAMES, LearnedPolicy, MaxChargePolicy, Policy, RandomPolicy

__all__ = [
    "POLICY_NAMES",
    "EvalConfig",
    "EvalResult",
    "LearnedPolicy",
    "MaxChargePolicy",
    "MetricsReport",
    "OracleResult",
    "Policy",
    "RandomPolicy",
    "SessionOutcome",
    "build_report",
    "energy_floors",
    "evaluate",
    "evaluation_sessions",
    "greedy_oracle",
    "ledger_frame",
    "metrics_frame",
    "midpoint_slot",
    "plan_session",
    "required_energy_kwh",
    "run_evaluation",
    "schedule_energy_cost",
    "session_outcomes",
    "soc_fulfillment",
    "soc_frame",
    "soc_maintenance",
    "user_satisfaction",
    "write_ledger_csv",
    "write_metrics_csv",
    "write_metrics_json",
    "write_soc_csv",
]
