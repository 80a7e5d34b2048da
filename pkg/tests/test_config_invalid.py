import re

import pytest
from pilepilot.config import build_run_config
from pilepilot.errors import ConfigError

from .helpers import cli
from .helpers.tmp_file_manager import TmpFileManager
from .helpers.types import InputConfig


def test_incorrect_config():
    """Confirm raises nicely on invalid toml, or unknown config."""
    with TmpFileManager() as manager:
        out = manager.tmpdir()

        # Invalid toml file:
        code, record = cli.error_record(
            ["pilepilot", "eval", "--out", str(out), "--config", str(manager.tmpfile("lafdldfa//$$ : foo ", suffix=".toml"))]
        )
        assert code == 1
        assert record["error"] == "ConfigError"
        assert "Invalid toml" in record["message"]

        # Unknown top level param:
        code, record = cli.error_record(
            ["pilepilot", "eval", "--out", str(out), "--config", str(manager.tmpfile("foo = 'bar'", suffix=".toml"))]
        )
        assert record["message"] == "[root]: Unknown property: 'foo'."

        # Tables aren't part of the flat format:
        with pytest.raises(ConfigError, match=re.escape("[root]: Unknown property: 'station'.")):
            build_run_config(manager.tmpfile("[station]\nn_piles = 3\n", suffix=".toml"))

        # Missing file:
        with pytest.raises(ConfigError, match="doesn't exist"):
            build_run_config(manager.root_dir + "/absent.toml")


@pytest.mark.parametrize(
    "config, message",
    [
        ({"scenario": "maybe"}, "[scenario]: Expected one of ['certain', 'uncertain']."),
        ({"ablation": "no-ca"}, "[ablation]: Expected one of ['full', 'no_critic_aug', 'no_high', 'no_either']."),
        ({"update_cadence": "hourly"}, "[update_cadence]: Expected one of ['episode', 'slot']."),
        ({"n_piles": "ten"}, "[n_piles]: Expected an integer."),
        ({"n_piles": 2.5}, "[n_piles]: Expected an integer."),
        ({"allow_discharge": 1}, "[allow_discharge]: Expected a boolean."),
        ({"rho": "high"}, "[rho]: Expected a number."),
        ({"name": 3}, "[name]: Expected a string."),
        ({"n_piles": 0}, "[n_piles]: Must be at least 1."),
        ({"episodes": -1}, "[episodes]: Must be at least 0."),
        ({"p_station_max_kw": 0.0}, "[p_station_max_kw]: Must be greater than 0."),
        ({"gamma": 1.0}, "[gamma]: Must be less than 1."),
        ({"charge_efficiency": 1.5}, "[charge_efficiency]: Must be at most 1."),
        ({"tier_threshold": 1.0}, "[tier_threshold]: Must be less than 1."),
        ({"name": "my run"}, "[name]: Must match '^[A-Za-z0-9_.-]+$'."),
    ],
)
def test_schema_violations(config: InputConfig, message: str):
    with TmpFileManager() as manager:
        with pytest.raises(ConfigError) as err:
            build_run_config(manager.create_cfg(config))
        assert str(err.value) == message


@pytest.mark.parametrize(
    "config, message",
    [
        ({"batch_size": 64, "buffer_capacity": 32}, "[batch_size]: Must not exceed buffer_capacity."),
        ({"soc_hw_min": 0.9, "soc_hw_max": 0.5}, "[soc_hw_min]: Need 0 <= soc_hw_min < soc_hw_max <= 1."),
        ({"load_base_kw": 900.0}, "[load_peak_kw]: Need 0 < load_base_kw < load_peak_kw."),
    ],
)
def test_cross_field_violations(config: InputConfig, message: str):
    """Schema-valid values that only conflict with each other."""
    with TmpFileManager() as manager:
        with pytest.raises(ConfigError) as err:
            build_run_config(manager.create_cfg(config))
        assert str(err.value) == message


def test_flag_values_are_usage_errors():
    with TmpFileManager() as manager:
        code, stderr = cli.failure(["pilepilot", "eval", "--out", str(manager.tmpdir()), "--rho", "-1"])
        assert code == 2
        assert "--rho" in stderr
