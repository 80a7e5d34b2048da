import datetime as dt
import re

import numpy as np
import pytest
from pilepilot.cli import export_trace, generate_synthetic_traces, ingest_traces
from pilepilot.cli.traces import TraceDigest, content_hash
from pilepilot.config import SyntheticProfile
from pilepilot.errors import AlignmentError, DomainError, ParseError, TraceGapError
from pilepilot.simenv import Traces

from ..helpers.tmp_file_manager import TmpFileManager


def test_sub_hourly_readings_are_averaged():
    with TmpFileManager() as manager:
        load = manager.trace_csv([90.0, 110.0, 95.0, 105.0] * 48, freq="15min")
        price = manager.trace_csv([0.05] * 48)
        load_trace, price_trace = ingest_traces(load, price)
    assert len(load_trace) == 48
    assert load_trace.values.tolist() == [100.0] * 48
    assert price_trace.values.tolist() == [0.05] * 48
    assert load_trace.start == dt.datetime(2018, 7, 2)
    assert (load_trace.unit, price_trace.unit) == ("kW", "USD/kWh")


def test_hourly_readings_pass_through():
    values = [float(v) for v in range(48)]
    with TmpFileManager() as manager:
        load_trace, _ = ingest_traces(
            manager.trace_csv(values, start="2018-07-02T05:00:00"),
            manager.trace_csv([0.1] * 48, start="2018-07-02T05:00:00"),
        )
    assert load_trace.values.tolist() == values
    traces = Traces(load_trace, load_trace)
    assert traces.first_midnight == 19
    assert traces.n_days == 1


def test_misaligned_traces():
    with TmpFileManager() as manager:
        load = manager.trace_csv([100.0] * 24)
        price = manager.trace_csv([0.05] * 24, start="2018-07-02T01:00:00")
        match = re.escape("first unmatched hour 2018-07-02T00:00:00")
        with pytest.raises(AlignmentError, match=match):
            ingest_traces(load, price)


def test_gap_in_trace():
    with TmpFileManager() as manager:
        load = manager.tmpfile(
            "timestamp,value\n"
            "2018-07-02T00:00:00,1\n2018-07-02T01:00:00,1\n2018-07-02T03:00:00,1\n",
            suffix=".csv",
        )
        match = re.escape("no readings for 2018-07-02T02:00:00 (1 missing hours)")
        with pytest.raises(TraceGapError, match=match):
            ingest_traces(load, load)


@pytest.mark.parametrize(
    "body, line, message",
    [
        ("2018-07-02T00:00:00,1\n2018-07-02T01:00:00,abc\n", 3, "Invalid value 'abc'."),
        ("2018-07-02T00:00:00,1\nyesterday,2\n", 3, "Invalid timestamp 'yesterday'."),
        (
            "2018-07-02T00:00:00,1\n2018-07-02T01:00:00,2\n2018-07-02T02:00:00,-4\n",
            4,
            "Negative value -4.0.",
        ),
        ("2018-07-02T01:00:00,1\n2018-07-02T00:00:00,2\n", 3, "Timestamps must strictly increase."),
        ("2018-07-02T00:00:00,\n", 2, "Invalid value ''."),
    ],
)
def test_malformed_rows_report_their_line(body: str, line: int, message: str):
    with TmpFileManager() as manager:
        path = manager.tmpfile("timestamp,value\n" + body, suffix=".csv")
        with pytest.raises(ParseError) as err:
            ingest_traces(path, path)
    assert err.value.line == line
    assert str(err.value) == "{}:{}: {}".format(path, line, message)


def test_bad_header_and_missing_file():
    with TmpFileManager() as manager:
        path = manager.tmpfile("time,kw\n2018-07-02T00:00:00,1\n", suffix=".csv")
        header = "Expected the header 'timestamp,value', got 'time,kw'"
        with pytest.raises(ParseError, match=header) as err:
            ingest_traces(path, path)
        assert err.value.line == 1
        with pytest.raises(ParseError, match="No such file"):
            ingest_traces(manager.root_dir + "/absent.csv", path)
        empty = manager.tmpfile("timestamp,value\n", suffix=".csv")
        with pytest.raises(ParseError, match="holds no readings"):
            ingest_traces(empty, empty)


def test_utc_offsets_become_naive():
    with TmpFileManager() as manager:
        path = manager.tmpfile(
            "timestamp,value\n2018-07-02T02:00:00+02:00,1\n2018-07-02T03:00:00+02:00,2\n",
            suffix=".csv",
        )
        trace, _ = ingest_traces(path, path)
    assert trace.start == dt.datetime(2018, 7, 2)


def test_synthetic_traces_without_noise_repeat_daily():
    profile = SyntheticProfile(days=3, noise=0.0)
    load, price = generate_synthetic_traces(np.random.default_rng(0), 3, profile)
    assert len(load) == len(price) == 72
    np.testing.assert_array_equal(load.values[:24], load.values[24:48])
    np.testing.assert_array_equal(price.values[:24], price.values[48:])
    # Quiet nights, busy office hours, an expensive late afternoon.
    assert load.values[0] == pytest.approx(200.0, rel=1e-5)
    assert load.values[10] == pytest.approx(650.0)
    assert int(np.argmax(price.values[:24])) == 16
    assert price.values[16] == pytest.approx(0.09)


def test_synthetic_traces_are_seeded_and_positive():
    profile = SyntheticProfile(days=10, noise=0.5)
    a = generate_synthetic_traces(np.random.default_rng(1), 10, profile)
    b = generate_synthetic_traces(np.random.default_rng(1), 10, profile)
    c = generate_synthetic_traces(np.random.default_rng(2), 10, profile)
    assert np.array_equal(a[0].values, b[0].values)
    assert np.array_equal(a[1].values, b[1].values)
    assert not np.array_equal(a[0].values, c[0].values)
    assert (a[0].values > 0).all()
    assert (a[1].values > 0).all()


def test_synthetic_traces_need_a_day():
    with pytest.raises(DomainError, match="at least one day"):
        generate_synthetic_traces(np.random.default_rng(0), 0)


def test_export_round_trip_is_byte_identical():
    load, price = generate_synthetic_traces(np.random.default_rng(3), 2)
    with TmpFileManager() as manager:
        root = manager.tmpdir()
        export_trace(load, root / "load.csv")
        export_trace(price, root / "price.csv")
        again_load, again_price = ingest_traces(root / "load.csv", root / "price.csv")
        export_trace(again_load, root / "load2.csv")
        export_trace(again_price, root / "price2.csv")
        assert (root / "load.csv").read_bytes() == (root / "load2.csv").read_bytes()
        assert (root / "price.csv").read_bytes() == (root / "price2.csv").read_bytes()
        first_line = (root / "load.csv").read_text().splitlines()[1]
    assert first_line.startswith("2018-07-02T00:00:00,")


def test_trace_digest():
    load, price = generate_synthetic_traces(np.random.default_rng(3), 1)
    digest = TraceDigest.of(Traces(load, price), "synthetic")
    assert (digest.source, digest.start, digest.hours) == ("synthetic", "2018-07-02T00:00:00", 24)
    assert digest == TraceDigest.of(Traces(load, price), "synthetic")
    assert digest.load_hash != digest.price_hash
    # Same as `git hash-object` on a file holding "hello\n".
    assert content_hash(b"hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"
