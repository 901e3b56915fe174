"""
粒子生成則の積分と時間発展のチェックのテスト
"""
import math

import numpy as np
import pytest

from src.application.services.cosmology_service import (
    closed_form_N, creation_rate, derived_observables, lambda_estimate, run_simulation,
    simulate, trend_checks,
)
from src.application.services.integrators import rk4_step
from src.domain.entities.cosmology_state import (
    CosmologyState, Scale, ScaleParameters, SimulationConfig, SimulationMode, TimeSeries,
)
from src.domain.errors import SimulationError


@pytest.fixture(scope="module")
def tau(table):
    return table["tau_pi"].magnitude


@pytest.fixture(scope="module")
def long_run(table, tau):
    cfg = SimulationConfig(t_end=1e6 * tau, dt=tau, output_stride=10_000)
    return simulate(cfg, table)


def test_rk4_exponential_decay():
    y, t, dt = 1.0, 0.0, 0.1
    for _ in range(10):
        y = rk4_step(lambda _t, x: -x, t, y, dt)
        t += dt
    assert y == pytest.approx(math.exp(-1.0), rel=1e-6)


def test_rk4_is_exact_for_cubic_in_time():
    y = rk4_step(lambda t, _x: 3.0 * t ** 2, 0.0, 0.0, 2.0)
    assert y == pytest.approx(8.0, rel=1e-14)


def test_creation_rate_and_closed_form():
    assert creation_rate(4.0, 2.0) == 1.0
    assert closed_form_N(0.0, 9.0, 1.0) == 9.0
    assert closed_form_N(4.0, 1.0, 1.0) == 9.0
    with pytest.raises(SimulationError):
        closed_form_N(-1.0, 1.0, 1.0)
    with pytest.raises(SimulationError):
        creation_rate(-1.0, 1.0)


def test_derived_observables_today(table):
    G, R, H, rho = derived_observables(1e80, table)
    assert H == pytest.approx(2.12e-17, rel=1e-2)
    assert R == pytest.approx(1.4139e27, rel=1e-3)
    assert G * 1e80 * table["m_pi"].magnitude / table["c"].magnitude ** 2 == pytest.approx(R)
    assert rho == pytest.approx(8.80e-27, rel=1e-2)


def test_state_requires_at_least_one_particle(table):
    scale = ScaleParameters.from_table(table)
    with pytest.raises(SimulationError):
        CosmologyState.from_particle_count(0.0, 0.5, scale)


def test_planck_scale_parameters(table):
    scale = ScaleParameters.from_table(table, Scale.PLANCK)
    assert scale.tau == table["tau_planck"].magnitude
    assert scale.m == table["m_planck"].magnitude


def test_deterministic_matches_closed_form(table, tau):
    cfg = SimulationConfig(t_end=1000 * tau, dt=0.1 * tau, output_stride=100)
    ts = run_simulation(cfg, table)
    assert len(ts) == cfg.n_samples == 101
    for state in ts.samples:
        assert state.N == pytest.approx(closed_form_N(state.t, 1.0, tau), rel=1e-6)
    final = ts.samples[-1]
    assert final.N == pytest.approx(closed_form_N(final.t, 1.0, tau), rel=1e-8)


def test_rk4_global_error_is_fourth_order(table, tau):
    errors = []
    for dt in (tau, tau / 2):
        cfg = SimulationConfig(t_end=100 * tau, dt=dt, N0=100.0)
        ts = run_simulation(cfg, table)
        errors.append(abs(ts.samples[-1].N - closed_form_N(100 * tau, 100.0, tau)))
    assert 13.0 <= errors[0] / errors[1] <= 19.0


def test_step_larger_than_compton_time_is_rejected(table, tau):
    cfg = SimulationConfig(t_end=10 * tau, dt=2 * tau)
    with pytest.raises(SimulationError, match="step exceeds Compton time"):
        run_simulation(cfg, table)


@pytest.mark.parametrize("kwargs", [
    {"dt": 0.0}, {"t_end": -1.0}, {"N0": 0.5}, {"ensemble_size": 0},
    {"output_stride": 0}, {"workers": 0}, {"mode": "stochastic"},
    {"mode": "stochastic", "seed": -1}, {"mode": "stochastic", "seed": 2 ** 64},
])
def test_config_validation(kwargs):
    params = {"t_end": 1.0, "dt": 0.1}
    params.update(kwargs)
    with pytest.raises(SimulationError):
        SimulationConfig(**params)


def test_stochastic_requires_seed_message():
    with pytest.raises(SimulationError, match="stochastic mode requires seed"):
        SimulationConfig(t_end=1.0, dt=0.1, mode=SimulationMode.STOCHASTIC)


def test_step_count_absorbs_rounding(tau):
    cfg = SimulationConfig(t_end=100 * tau, dt=tau / 10, output_stride=7)
    assert cfg.n_steps == 1000
    assert cfg.n_samples == 1000 // 7 + 1


def test_fingerprint_ignores_workers():
    a = SimulationConfig(t_end=1.0, dt=0.1, workers=1)
    b = SimulationConfig(t_end=1.0, dt=0.1, workers=8)
    c = SimulationConfig(t_end=1.0, dt=0.2)
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


def test_stochastic_trajectory_is_non_decreasing(table, tau):
    cfg = SimulationConfig(t_end=100 * tau, dt=0.1 * tau, mode="stochastic", seed=1)
    counts = run_simulation(cfg, table).column("N")
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert counts[0] == 1.0
    assert all(float(n).is_integer() for n in counts)


def test_stochastic_is_reproducible_across_workers(table, tau):
    base = dict(t_end=20 * tau, dt=0.1 * tau, mode="stochastic", seed=42, ensemble_size=8)
    serial = run_simulation(SimulationConfig(**base), table)
    threaded = run_simulation(SimulationConfig(workers=4, **base), table)
    assert serial.n_mean == threaded.n_mean
    assert serial.n_std == threaded.n_std
    assert serial.fingerprint == threaded.fingerprint


def test_different_seeds_differ(table, tau):
    base = dict(t_end=50 * tau, dt=0.1 * tau, mode="stochastic")
    a = run_simulation(SimulationConfig(seed=1, **base), table).column("N")
    b = run_simulation(SimulationConfig(seed=2, **base), table).column("N")
    assert a != b


def test_ensemble_mean_tracks_closed_form(table, tau):
    cfg = SimulationConfig(t_end=100 * tau, dt=0.1 * tau, N0=1e4, mode="stochastic",
                           seed=2024, ensemble_size=1000, output_stride=100)
    ts = run_simulation(cfg, table)
    assert ts.is_ensemble
    standard_error = ts.n_std[-1] / math.sqrt(cfg.ensemble_size)
    assert abs(ts.n_mean[-1] - closed_form_N(100 * tau, 1e4, tau)) <= 3.0 * standard_error
    assert ts.n_std[0] == 0.0
    assert ts.n_std[-1] > 0.0


def _radius_series(radius, hubble):
    times = np.linspace(0.0, 2.0, 201)
    return TimeSeries(tuple(
        CosmologyState(t=float(t), N=1.0, G=1.0, R=radius(t), H=hubble, rho=1.0) for t in times
    ))


def test_lambda_vanishes_for_constant_radius():
    samples = lambda_estimate(_radius_series(lambda t: 5.0, 1.0))
    assert len(samples) == 199
    assert all(s.lam == 0.0 for s in samples)


def test_lambda_matches_hubble_squared_for_exponential_radius():
    hubble = 1.0
    samples = lambda_estimate(_radius_series(lambda t: math.exp(hubble * t), hubble))
    for s in samples:
        assert s.lam_over_h2 == pytest.approx(1.0, rel=1e-4)


def test_lambda_estimate_needs_three_samples(table, tau):
    cfg = SimulationConfig(t_end=tau, dt=tau)
    ts = run_simulation(cfg, table)
    with pytest.raises(SimulationError, match="too few samples"):
        lambda_estimate(ts)


def test_time_series_requires_increasing_times(table):
    scale = ScaleParameters.from_table(table)
    state = CosmologyState.from_particle_count(1.0, 4.0, scale)
    with pytest.raises(SimulationError):
        TimeSeries(samples=(state, state))


def test_short_run_skips_trend(table, tau):
    run = simulate(SimulationConfig(t_end=10 * tau, dt=tau), table)
    assert run.trend is None
    assert len(run.lambdas) == len(run.series) - 2
    with pytest.raises(SimulationError, match="insufficient span"):
        trend_checks(run.series)


def test_long_run_sample_grid(long_run, tau):
    t = np.array(long_run.series.column("t"))
    assert len(t) == 101
    assert t[-1] == pytest.approx(1e6 * tau)


def test_coupling_and_density_fall_as_inverse_time(long_run):
    trend = long_run.trend
    assert trend is not None
    assert trend.slope_G_t == pytest.approx(-1.0, abs=1e-3)
    assert trend.slope_rho_t == pytest.approx(-1.0, abs=1e-3)
    assert trend.slopes_within(1e-3)


def test_coupling_rate_scales_as_inverse_particle_count(long_run):
    assert long_run.trend.slope_Gdot_N == pytest.approx(-1.0, abs=0.05)


def test_energy_balance_terms(long_run):
    # dG/dt の項は dN/dt の項の -1/2 倍になる
    assert long_run.trend.term_ratio == pytest.approx(-0.5, abs=0.02)


def test_expansion_rate_residuals(long_run):
    trend = long_run.trend
    assert trend.rdot_residual == pytest.approx(0.5, abs=0.01)
    assert trend.r_ct_residual < 1e-3
    assert trend.hubble_age == pytest.approx(2.0, rel=1e-3)
    assert trend.identity_residual < 1e-12


def test_radius_grows_linearly_so_lambda_is_small(long_run):
    assert long_run.trend.max_lambda_over_h2 < 1e-2
