"""Trace files: ingestion of `timestamp,value` CSVs, the synthetic generator and export.

Exported values carry 6 significant digits, so ingesting an exported file and exporting it again
reproduces it byte for byte.
"""

import dataclasses
import datetime as dt
import hashlib
import logging
import os
import typing as tp

import numpy as np
import pandas as pd

from ..config import SyntheticProfile
from ..errors import AlignmentError, DomainError, ParseError, TraceGapError
from ..simenv import Trace, Traces
from ..simenv.types import DEFAULT_TRACE_START

logger = logging.getLogger(__name__)

PathLike = tp.Union[str, "os.PathLike[str]"]

COLUMNS = ("timestamp", "value")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S"
SIGNIFICANT_DIGITS = 6


def _read_series(path: PathLike) -> pd.Series:
    """Parse one CSV into a timestamp-indexed series, reporting the first bad line."""
    name = str(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as e:
        raise ParseError("No such file.", path=name) from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError("Not a readable CSV: {}".format(e), path=name) from e

    if tuple(frame.columns) != COLUMNS:
        raise ParseError(
            "Expected the header 'timestamp,value', got '{}'.".format(",".join(frame.columns)),
            path=name,
            line=1,
        )
    if frame.empty:
        raise ParseError("The file holds no readings.", path=name)

    try:
        stamps = pd.to_datetime(frame["timestamp"], errors="coerce", format="ISO8601")
    except ValueError as e:
        # Mixed UTC offsets can't share one column.
        raise ParseError("Inconsistent timestamps: {}".format(e), path=name) from e
    values = pd.to_numeric(frame["value"], errors="coerce")
    bad_stamp = stamps.isna().to_numpy()
    numeric = values.to_numpy(dtype=np.float64)
    bad_value = ~np.isfinite(numeric)
    negative = np.zeros(len(frame), dtype=bool)
    negative[~bad_value] = numeric[~bad_value] < 0
    unordered = np.zeros(len(frame), dtype=bool)
    unordered[1:] = ~(stamps.diff().iloc[1:] > pd.Timedelta(0)).to_numpy()
    bad = bad_stamp | bad_value | negative | unordered
    if bad.any():
        idx = int(np.argmax(bad))
        # Line 1 is the header.
        line = idx + 2
        if bad_stamp[idx]:
            message = "Invalid timestamp '{}'.".format(frame["timestamp"].iloc[idx])
        elif bad_value[idx]:
            message = "Invalid value '{}'.".format(frame["value"].iloc[idx])
        elif negative[idx]:
            message = "Negative value {}.".format(numeric[idx])
        else:
            message = "Timestamps must strictly increase."
        raise ParseError(message, path=name, line=line)

    index = pd.DatetimeIndex(stamps)
    if index.tz is not None:
        index = index.tz_convert(None)
    return pd.Series(values.to_numpy(dtype=np.float64), index=index, name=name)


def _hourly(series: pd.Series) -> pd.Series:
    """Mean-aggregate sub-hourly readings. An hour without readings is a gap."""
    hourly = series.resample("h").mean()
    missing = hourly.index[hourly.isna()]
    if len(missing):
        raise TraceGapError(
            "{}: no readings for {} ({} missing hours).".format(
                series.name, missing[0].strftime(TIMESTAMP_FORMAT), len(missing)
            )
        )
    return hourly


def ingest_traces(load_csv: PathLike, price_csv: PathLike) -> tp.Tuple[Trace, Trace]:
    """Read the building load (kW) and price (USD/kWh) CSVs into aligned hourly traces.

    Raises:
        ParseError: a malformed row, with its 1-based line number.
        TraceGapError: an hour without readings inside a trace.
        AlignmentError: the two traces cover different hours.
    """
    load = _hourly(_read_series(load_csv))
    price = _hourly(_read_series(price_csv))
    if not load.index.equals(price.index):
        only_load = load.index.difference(price.index)
        only_price = price.index.difference(load.index)
        first = min(only_load[:1].tolist() + only_price[:1].tolist())
        raise AlignmentError(
            "Load covers {} to {}, price covers {} to {}; first unmatched hour {}.".format(
                load.index[0].strftime(TIMESTAMP_FORMAT),
                load.index[-1].strftime(TIMESTAMP_FORMAT),
                price.index[0].strftime(TIMESTAMP_FORMAT),
                price.index[-1].strftime(TIMESTAMP_FORMAT),
                first.strftime(TIMESTAMP_FORMAT),
            )
        )
    start = load.index[0].to_pydatetime()
    logger.info("Ingested %d hours of traces starting %s.", len(load), start)
    return (
        Trace(load.to_numpy(), start=start, unit="kW"),
        Trace(price.to_numpy(), start=start, unit="USD/kWh"),
    )


def _bump(hours: np.ndarray, centre: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((hours - centre) / width) ** 2)


def generate_synthetic_traces(
    rng: np.random.Generator,
    days: int,
    profile: tp.Optional[SyntheticProfile] = None,
    start: dt.datetime = DEFAULT_TRACE_START,
) -> tp.Tuple[Trace, Trace]:
    """Office-like load and price traces for `days` days starting at midnight.

    Load has low nights and humps around 10:00 and 15:00 between `load_base_kw` and
    `load_peak_kw`. Price sits at `price_base` off-peak and reaches `price_peak_multiplier`
    times that in the late afternoon. Both get multiplicative Gaussian noise and stay strictly
    positive. Zero noise gives traces that repeat every 24 hours.
    """
    if days < 1:
        raise DomainError("Need at least one day, got {}.".format(days))
    if profile is None:
        profile = SyntheticProfile(days=days)

    hours = np.tile(np.arange(24, dtype=np.float64), days)
    shape = np.minimum(_bump(hours, 10.0, 2.0) + _bump(hours, 15.0, 2.0), 1.0)
    load = profile.load_base_kw + (profile.load_peak_kw - profile.load_base_kw) * shape
    price = profile.price_base * (1.0 + (profile.price_peak_multiplier - 1.0) * _bump(hours, 16.0, 2.5))

    load_noise = rng.standard_normal(hours.shape)
    price_noise = rng.standard_normal(hours.shape)
    load = np.maximum(load * (1.0 + profile.noise * load_noise), 0.05 * profile.load_base_kw)
    price = np.maximum(price * (1.0 + profile.noise * price_noise), 0.1 * profile.price_base)

    return Trace(load, start=start, unit="kW"), Trace(price, start=start, unit="USD/kWh")


def trace_frame(trace: Trace) -> pd.DataFrame:
    stamps = pd.date_range(trace.start, periods=len(trace), freq="h")
    return pd.DataFrame(
        {
            "timestamp": stamps.strftime(TIMESTAMP_FORMAT),
            "value": ["{:.{}g}".format(v, SIGNIFICANT_DIGITS) for v in trace.values],
        }
    )


def export_trace(trace: Trace, path: PathLike) -> None:
    """Write `timestamp,value` rows, values at 6 significant digits."""
    trace_frame(trace).to_csv(path, index=False, lineterminator="\n")


def content_hash(data: bytes) -> str:
    """Git's blob hash of `data`."""
    header = "blob {}\0".format(len(data)).encode()
    return hashlib.sha1(header + data).hexdigest()


@dataclasses.dataclass(frozen=True)
class TraceDigest:
    """Identifies the traces a run used: where they came from and what they held."""

    source: str
    start: str
    hours: int
    load_hash: str
    price_hash: str

    @classmethod
    def of(cls, traces: Traces, source: str) -> "TraceDigest":
        def digest(trace: Trace) -> str:
            return content_hash(trace_frame(trace).to_csv(index=False, lineterminator="\n").encode())

        return cls(
            source=source,
            start=traces.start.strftime(TIMESTAMP_FORMAT),
            hours=len(traces.load),
            load_hash=digest(traces.load),
            price_hash=digest(traces.price),
        )
