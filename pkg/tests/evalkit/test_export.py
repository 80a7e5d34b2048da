import json

import pandas as pd
import pytest
from pilepilot.evalkit import (
    EvalConfig,
    MaxChargePolicy,
    build_report,
    metrics_frame,
    run_evaluation,
    write_ledger_csv,
    write_metrics_json,
    write_soc_csv,
)
from pilepilot.simenv import PenaltyConfig, StationConfig

from ..helpers.tmp_file_manager import TmpFileManager
from ..helpers.utils import constant_traces

STATION = StationConfig(n_piles=2)
PENALTY = PenaltyConfig()


def test_ledger_and_soc_exports():
    result = run_evaluation(MaxChargePolicy(STATION), STATION, PENALTY, constant_traces(1), EvalConfig(eval_days=1))
    with TmpFileManager() as manager:
        root = manager.tmpdir()
        write_ledger_csv(result.ledgers, root / "ledger.csv")
        write_soc_csv(result.ledgers, root / "soc.csv")
        ledger = pd.read_csv(root / "ledger.csv")
        soc = pd.read_csv(root / "soc.csv")
    assert list(ledger.columns) == ["slot", "building_load", "price", "total_load", "pile_0_power", "pile_1_power"]
    assert list(ledger["slot"]) == list(range(24))
    assert ledger["total_load"].tolist() == pytest.approx(
        (ledger["building_load"] + ledger["pile_0_power"] + ledger["pile_1_power"]).tolist()
    )
    assert list(soc.columns) == ["slot", "pile_0_soc", "pile_1_soc"]
    # No EV before the earliest possible arrival.
    assert soc.loc[0:6, "pile_0_soc"].isna().all()


def test_metrics_json_writes_null_for_undefined():
    report = build_report([], [], PENALTY)
    with TmpFileManager() as manager:
        path = manager.tmpdir() / "metrics.json"
        write_metrics_json(report, path)
        with open(path) as file:
            data = json.load(file)
    assert data["soc_maintenance_pct"] is None
    assert data["n_sessions"] == 0
    assert data["total_cost_usd"] == 0.0


def test_metrics_frame_rows():
    empty = build_report([], [], PENALTY)
    frame = metrics_frame({"full": empty, "no_high": empty}, label="variant")
    assert list(frame["variant"]) == ["full", "no_high"]
    assert frame.loc[0, "undefined"] == "soc_fulfillment_pct;soc_maintenance_pct;user_satisfaction_pct"
