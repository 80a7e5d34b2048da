import numpy as np
import pytest
from pilepilot.evalkit import energy_floors, greedy_oracle, plan_session, required_energy_kwh, schedule_energy_cost
from pilepilot.simenv import (
    EvSession,
    PenaltyConfig,
    StationConfig,
    initial_state,
    per_pile_power_limit,
    sample_ev_sessions,
    step,
)

from ..helpers.utils import constant_traces, make_session, make_traces

PENALTY = PenaltyConfig()


def test_constant_price_costs_energy_times_price():
    station = StationConfig(n_piles=3)
    traces = constant_traces(1, load_kw=0.0, price=0.07)
    sessions = {0: [make_session(), make_session(t_arr=7, t_dep=20, soc_arr=0.3), make_session(soc_dep=0.6)]}
    result = greedy_oracle(sessions, traces, station, PENALTY)
    energy = sum(required_energy_kwh(s, station) for s in sessions[0])
    assert result.report.energy_cost_usd == pytest.approx(0.07 * energy, rel=1e-9)
    assert result.infeasible == []
    assert result.report.soc_fulfillment_pct == pytest.approx(100.0)


def test_cheapest_slot_takes_everything():
    station = StationConfig(n_piles=1)
    traces = make_traces([100.0] * 24, [0.10, 0.02] + [0.05] * 22)
    session = make_session(t_arr=0, t_dep=2, soc_dep=0.5)
    result = greedy_oracle({0: [session]}, traces, station, PENALTY)
    plan = result.schedule[0]
    assert plan.shape == (24, 1)
    assert plan[0, 0] == 0.0
    assert plan[1, 0] == pytest.approx(required_energy_kwh(session, station))
    assert result.outcomes[0].soc_at_actual_departure == pytest.approx(0.5)


def test_equal_prices_prefer_earlier_slots():
    station = StationConfig(n_piles=1, p_station_max_kw=5.0)
    traces = constant_traces(1, price=0.05)
    session = make_session(t_arr=9, t_dep=19, soc_dep=0.5)
    plan = greedy_oracle({0: [session]}, traces, station, PENALTY).schedule[0][:, 0]
    # 6.32 kWh at 5 kW: one full slot, then the rest.
    assert plan[9] == 5.0
    assert plan[10] == pytest.approx(required_energy_kwh(session, station) - 5.0)
    assert not plan[11:].any()


def test_infeasible_session_is_flagged():
    station = StationConfig(n_piles=1)
    session = make_session(t_arr=9, t_dep=10, soc_arr=0.3, soc_dep=0.9, capacity_kwh=600.0)
    result = greedy_oracle({0: [session]}, constant_traces(1), station, PENALTY)
    assert result.infeasible == [session]
    assert result.report.infeasible_sessions == 1
    assert result.report.soc_fulfillment_pct < 100.0


def _earliest_first(sessions, day_start, station):  # type: ignore
    plan = np.zeros((24, station.n_piles))
    docked = [sum(1 for s in sessions if s.t_arr <= t < s.t_dep_actual) for t in range(day_start, day_start + 24)]
    for pile, session in enumerate(sessions):
        remaining = required_energy_kwh(session, station)
        for t in range(session.t_arr, session.t_dep_actual):
            power = min(per_pile_power_limit(station.p_station_max_kw, docked[t - day_start]), remaining)
            plan[t - day_start, pile] = power
            remaining -= power
    return plan


def test_oracle_beats_earliest_first_charging():
    station = StationConfig(n_piles=5)
    prices = [0.03 + 0.05 * np.sin(t / 3.0) ** 2 for t in range(24 * 6)]
    traces = make_traces([200.0] * (24 * 6), prices)
    rng = np.random.default_rng(8)
    sessions = {day: sample_ev_sessions(rng, day, "certain", 5, day_start=24 * day) for day in range(6)}
    result = greedy_oracle(sessions, traces, station, PENALTY)
    for day, day_sessions in sessions.items():
        oracle_cost = schedule_energy_cost(result.schedule[day], 24 * day, traces, station)
        naive_cost = schedule_energy_cost(_earliest_first(day_sessions, 24 * day, station), 24 * day, traces, station)
        assert oracle_cost <= naive_cost + 1e-9


def _replay(result, sessions, traces, station):  # type: ignore
    """Drive the plan through the station, which rejects powers outside their boundaries."""
    for day, day_sessions in sessions.items():
        state = initial_state(traces, station, traces.day_start(day), day_sessions)
        for k in range(24):
            state, _ = step(state, result.schedule[day][k], traces, station)


def test_late_cheap_slots_keep_the_envelope():
    # Pile 0 only has 15 kW while pile 1 is docked, so by slot 11 it must have drawn a little.
    station = StationConfig(n_piles=2, p_station_max_kw=30.0)
    traces = make_traces([100.0] * 24, [0.10] * 12 + [0.02] * 7 + [0.10] * 5)
    long_stay = EvSession(9, 19, 19, 0.3, 0.8, 200.0)
    short_stay = EvSession(9, 12, 12, 0.3, 0.4, 60.0)
    sessions = {0: [long_stay, short_stay]}

    result = greedy_oracle(sessions, traces, station, PENALTY)
    _replay(result, sessions, traces, station)

    plan = result.schedule[0][:, 0]
    forced = 0.00125 * 200.0 / 0.95
    assert plan[9] == pytest.approx(forced, rel=1e-9)
    assert not plan[10:12].any()
    assert plan[12:19].sum() == pytest.approx(required_energy_kwh(long_stay, station) - forced, rel=1e-9)
    assert result.infeasible == []
    assert result.report.soc_fulfillment_pct == pytest.approx(100.0)


def test_energy_floors_follow_the_envelope():
    station = StationConfig(n_piles=2, p_station_max_kw=30.0)
    session = EvSession(9, 19, 19, 0.3, 0.8, 200.0)
    limits = {t: 15.0 if t < 12 else 30.0 for t in range(9, 19)}
    floors = energy_floors(session, limits, station)
    assert floors[9] == floors[10] == 0.0
    assert floors[11] == pytest.approx(0.00125 * 200.0 / 0.95)
    assert floors[18] == pytest.approx(required_energy_kwh(session, station))


def test_energy_floors_never_exceed_the_deliverable_energy():
    station = StationConfig(n_piles=1)
    session = make_session(t_arr=9, t_dep=11, soc_arr=0.1, soc_dep=0.9, capacity_kwh=400.0)
    floors = energy_floors(session, {9: 150.0, 10: 150.0}, station)
    assert floors == {9: pytest.approx(150.0), 10: pytest.approx(300.0)}


def test_plan_session_reports_unreachable_targets():
    station = StationConfig(n_piles=1)
    session = make_session(t_arr=9, t_dep=11, soc_arr=0.1, soc_dep=0.9, capacity_kwh=400.0)
    powers, reached = plan_session(session, {9: 150.0, 10: 150.0}, constant_traces(1), station)
    assert not reached
    assert powers == {9: 150.0, 10: 150.0}


@pytest.mark.parametrize("scenario", ["certain", "uncertain"])
@pytest.mark.parametrize("allow_discharge", [True, False])
@pytest.mark.parametrize("p_station_max_kw", [20.0, 60.0, 150.0])
def test_plans_replay_within_bounds(scenario: str, allow_discharge: bool, p_station_max_kw: float):
    station = StationConfig(n_piles=6, p_station_max_kw=p_station_max_kw, allow_discharge=allow_discharge)
    prices = [0.10] * 12 + [0.02] * 7 + [0.10] * 5
    traces = make_traces([150.0] * (24 * 8), prices * 8)
    rng = np.random.default_rng(21)
    sessions = {
        day: sample_ev_sessions(rng, day, scenario, station.n_piles, day_start=24 * day)  # type: ignore
        for day in range(8)
    }
    result = greedy_oracle(sessions, traces, station, PENALTY)
    _replay(result, sessions, traces, station)
    for day, day_sessions in sessions.items():
        plan = result.schedule[day]
        assert (plan >= 0.0).all()
        for k in range(24):
            n_docked = sum(1 for s in day_sessions if s.t_arr <= 24 * day + k < s.t_dep_actual)
            if n_docked:
                assert plan[k].max() <= per_pile_power_limit(station.p_station_max_kw, n_docked) + 1e-9
