"""Plot-ready exports of reports and per-slot ledgers."""

import json
import os
import typing as tp

import pandas as pd

from ..simenv import SlotLedger
from .metrics import MetricsReport

PathLike = tp.Union[str, "os.PathLike[str]"]


def write_metrics_json(report: MetricsReport, path: PathLike) -> None:
    with open(path, "w") as file:
        json.dump(report.to_dict(), file, indent=2, sort_keys=True)


def metrics_frame(reports: tp.Mapping[str, MetricsReport], label: str = "run") -> pd.DataFrame:
    """One row per named report."""
    rows = []
    for name, report in reports.items():
        row = report.to_dict()
        row["undefined"] = ";".join(row["undefined"])
        rows.append({label: name, **row})
    return pd.DataFrame(rows)


def write_metrics_csv(
    reports: tp.Mapping[str, MetricsReport], path: PathLike, label: str = "run"
) -> None:
    metrics_frame(reports, label).to_csv(path, index=False)


def ledger_frame(ledgers: tp.Sequence[SlotLedger]) -> pd.DataFrame:
    """`slot,building_load,price,total_load,pile_0_power,...`."""
    n_piles = len(ledgers[0].powers) if ledgers else 0
    data: tp.Dict[str, tp.List[float]] = {
        "slot": [ledger.slot for ledger in ledgers],
        "building_load": [ledger.building_load_kw for ledger in ledgers],
        "price": [ledger.price for ledger in ledgers],
        "total_load": [ledger.total_load_kw for ledger in ledgers],
    }
    for i in range(n_piles):
        data["pile_{}_power".format(i)] = [ledger.powers[i] for ledger in ledgers]
    return pd.DataFrame(data)


def soc_frame(ledgers: tp.Sequence[SlotLedger]) -> pd.DataFrame:
    """SoC per pile at the end of each slot, empty where no EV was docked."""
    n_piles = len(ledgers[0].powers) if ledgers else 0
    data: tp.Dict[str, tp.List[tp.Any]] = {"slot": [ledger.slot for ledger in ledgers]}
    for i in range(n_piles):
        data["pile_{}_soc".format(i)] = [ledger.soc_end[i] for ledger in ledgers]
    return pd.DataFrame(data)


def write_ledger_csv(ledgers: tp.Sequence[SlotLedger], path: PathLike) -> None:
    ledger_frame(ledgers).to_csv(path, index=False)


def write_soc_csv(ledgers: tp.Sequence[SlotLedger], path: PathLike) -> None:
    soc_frame(ledgers).to_csv(path, index=False)
