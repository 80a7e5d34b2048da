import re

import numpy as np
import pytest
from pilepilot.errors import DomainEmpty, DomainError
from pilepilot.simenv import (
    PileState,
    StationConfig,
    apply_power,
    per_pile_power_limit,
    power_boundaries,
    sample_ev_sessions,
    soc_envelope,
)

from ..helpers.utils import docked, make_session

CFG = StationConfig(n_piles=10, p_station_max_kw=150.0, charge_efficiency=0.95, soc_hw_min=0.1)


@pytest.mark.parametrize("p_max, n_docked, expected", [(150.0, 10, 15.0), (150.0, 1, 150.0), (150.0, 4, 37.5)])
def test_per_pile_power_limit(p_max: float, n_docked: int, expected: float):
    assert per_pile_power_limit(p_max, n_docked) == pytest.approx(expected, rel=1e-12)


def test_per_pile_power_limit_needs_docked_evs():
    with pytest.raises(DomainEmpty, match="No pile limit"):
        per_pile_power_limit(150.0, 0)


def test_soc_envelope():
    session = make_session(t_arr=9, t_dep=19, soc_dep=0.8)
    # 6 slots remain after slot 12: 0.8 - 6 * 0.2375 < 0, floored at the hardware minimum.
    assert soc_envelope(session, 12, 15.0, CFG) == (pytest.approx(0.1), 1.0)
    # No slot remains: the EV must already be at its target.
    lb, ub = soc_envelope(session, 18, 15.0, CFG)
    assert lb == pytest.approx(0.8, rel=1e-12)
    assert ub == CFG.soc_hw_max
    # One slot remains.
    lb, _ = soc_envelope(session, 17, 15.0, CFG)
    assert lb == pytest.approx(0.8 - 0.2375, rel=1e-12)


def test_soc_envelope_outside_window():
    session = make_session(t_arr=9, t_dep=19)
    with pytest.raises(DomainError, match=re.escape("[9, 19)")):
        soc_envelope(session, 19, 15.0, CFG)


@pytest.mark.parametrize(
    "soc, expected_max",
    [
        (0.4, 15.0),
        (0.99, 0.01 * 60 / 0.95),
        (1.0, 0.0),
    ],
)
def test_power_boundaries_upper(soc: float, expected_max: float):
    pile = docked(soc=soc, session=make_session(t_arr=9, t_dep=19, soc_dep=0.8))
    p_min, p_max = power_boundaries(pile, 10, 15.0, CFG)
    assert p_max == pytest.approx(expected_max, rel=1e-9, abs=1e-12)
    assert p_min <= p_max


def test_power_boundaries_lower_uses_discharge_efficiency():
    # Slot 10 leaves 8 slots, so the envelope floor is the hardware minimum.
    pile = docked(soc=0.5, session=make_session(t_arr=9, t_dep=19, soc_dep=0.8))
    p_min, _ = power_boundaries(pile, 10, 15.0, CFG)
    assert p_min == -15.0
    pile = docked(soc=0.12, session=make_session(t_arr=9, t_dep=19, soc_dep=0.8))
    p_min, _ = power_boundaries(pile, 10, 15.0, CFG)
    assert p_min == pytest.approx(-0.02 * 60 * 0.95, rel=1e-9)


def test_power_boundaries_without_discharge():
    cfg = StationConfig(n_piles=10, allow_discharge=False)
    pile = docked(soc=0.5, session=make_session(t_arr=9, t_dep=19, soc_dep=0.8))
    assert power_boundaries(pile, 10, 15.0, cfg)[0] == 0.0


def test_power_boundaries_empty_pile():
    with pytest.raises(DomainError, match="no docked EV"):
        power_boundaries(PileState(pile_id=3), 10, 15.0, CFG)


def test_apply_power_examples():
    assert apply_power(docked(soc=0.4), 0.0, CFG).soc == 0.4
    charged = apply_power(docked(soc=0.4), 15.0, CFG)
    assert charged.soc == pytest.approx(0.6375, rel=1e-12)
    assert not charged.clamped
    discharged = apply_power(docked(soc=0.6375), -15.0, CFG)
    assert discharged.soc == pytest.approx(0.6375 - 15 / (0.95 * 60), rel=1e-12)
    assert discharged.soc == pytest.approx(0.3743, abs=1e-4)


def test_apply_power_clamps_and_reports():
    update = apply_power(docked(soc=0.95), 15.0, CFG)
    assert update.soc == 1.0
    assert update.clamped


def test_round_trip_loses_eta_squared():
    """Charging then discharging the energy that came in loses a factor eta^2."""
    rng = np.random.default_rng(7)
    for _ in range(100):
        soc = rng.uniform(0.3, 0.6)
        power = rng.uniform(0.1, 15.0)
        up = apply_power(docked(soc=soc), power, CFG).soc
        down = apply_power(docked(soc=up), -power * CFG.charge_efficiency**2, CFG).soc
        assert down == pytest.approx(soc, abs=1e-12)
        assert down <= soc + 1e-15


def test_greedy_charge_meets_every_certain_target():
    """Charging at p_max every slot reaches the expected SoC by the planned departure."""
    rng = np.random.default_rng(0)
    sessions = [s for day in range(100) for s in sample_ev_sessions(rng, day, "certain", 10)]
    assert len(sessions) == 1000
    for session in sessions:
        pile = PileState(pile_id=0, session=session, soc_now=session.soc_arr)
        for t in range(session.t_arr, session.t_dep_planned):
            # Worst case pile limit: every pile of the station busy.
            p_max = power_boundaries(pile, t, 15.0, CFG)[1]
            pile = PileState(pile_id=0, session=session, soc_now=apply_power(pile, p_max, CFG).soc)
        assert pile.soc_now is not None
        assert pile.soc_now >= session.soc_dep_expected - 1e-6
