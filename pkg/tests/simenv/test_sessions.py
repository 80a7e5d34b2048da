import numpy as np
import pytest
from pilepilot.errors import DomainError
from pilepilot.simenv import EvSession, sample_ev_sessions


def _sample(seed: int, scenario: str, days: int = 50, n_piles: int = 10) -> list[EvSession]:
    rng = np.random.default_rng(seed)
    return [s for day in range(days) for s in sample_ev_sessions(rng, day, scenario, n_piles)]  # type: ignore


def test_one_session_per_pile():
    sessions = sample_ev_sessions(np.random.default_rng(0), 3, "certain", 7)
    assert len(sessions) == 7
    for session in sessions:
        assert 24 * 3 <= session.t_arr < session.t_dep_planned < 24 * 4


def test_day_start_offsets_times():
    rng_a, rng_b = np.random.default_rng(5), np.random.default_rng(5)
    plain = sample_ev_sessions(rng_a, 0, "certain", 3)
    offset = sample_ev_sessions(rng_b, 0, "certain", 3, day_start=100)
    assert [s.t_arr + 100 for s in plain] == [s.t_arr for s in offset]


def test_certain_departs_as_planned():
    assert all(s.t_dep_actual == s.t_dep_planned for s in _sample(1, "certain"))


def test_uncertain_departs_early_within_window():
    sessions = _sample(2, "uncertain")
    assert all(s.t_arr + 1 <= s.t_dep_actual < s.t_dep_planned for s in sessions)
    # Some spread over the window, not a fixed offset.
    assert len({s.t_dep_planned - s.t_dep_actual for s in sessions}) > 3


@pytest.mark.parametrize("scenario", ["certain", "uncertain"])
def test_sessions_respect_distribution_bounds(scenario: str):
    for s in _sample(3, scenario):
        hour_arr = s.t_arr % 24
        hour_dep = s.t_dep_planned % 24
        assert 7 <= hour_arr <= 12
        assert 16 <= hour_dep <= 23
        assert 0.3 <= s.soc_arr <= 0.6
        assert 0.6 <= s.soc_dep_expected <= 0.9
        assert s.soc_arr < s.soc_dep_expected
        assert s.capacity_kwh == 60.0


def test_sampling_is_deterministic():
    assert _sample(9, "uncertain", days=5) == _sample(9, "uncertain", days=5)
    assert _sample(9, "uncertain", days=5) != _sample(10, "uncertain", days=5)


def test_unknown_scenario():
    with pytest.raises(DomainError, match="Unknown scenario"):
        sample_ev_sessions(np.random.default_rng(0), 0, "sometimes", 2)  # type: ignore


@pytest.mark.parametrize(
    "kwargs, match",
    [
        ({"t_arr": 10, "t_dep_planned": 10, "t_dep_actual": 10}, "arrive before"),
        ({"t_arr": 9, "t_dep_planned": 19, "t_dep_actual": 9}, "Actual departure"),
        ({"t_arr": 9, "t_dep_planned": 19, "t_dep_actual": 20}, "Actual departure"),
    ],
)
def test_session_invariants(kwargs: dict, match: str):
    with pytest.raises(DomainError, match=match):
        EvSession(soc_arr=0.4, soc_dep_expected=0.8, **kwargs)


def test_session_soc_order():
    with pytest.raises(DomainError, match="soc_arr < soc_dep_expected"):
        EvSession(t_arr=9, t_dep_planned=19, t_dep_actual=19, soc_arr=0.8, soc_dep_expected=0.8)
