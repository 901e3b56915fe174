"""
揺らぎによる粒子生成則 dN/dt = sqrt(N)/tau を積分し、宇宙論的な観測量の時系列を作るサービス
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np
from scipy.stats import linregress

from src.application.services.integrators import rk4_step
from src.config.logger import get_module_logger
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.cosmology_state import (
    CosmologyState, LambdaSample, ScaleParameters, SimulationConfig, SimulationMode,
    SimulationRun, TimeSeries, TrendReport,
)
from src.domain.errors import SimulationError

logger = get_module_logger("cosmology")

# これより大きい平均では Poisson の代わりに正規近似を使う
POISSON_NORMAL_THRESHOLD = 1e12
MIN_TREND_SAMPLES = 10
MIN_TREND_DECADES = 2.0


def creation_rate(N: float, tau: float) -> float:
    """粒子の生成率 sqrt(N)/tau (s^-1)"""
    if N < 0:
        raise SimulationError("particle count must be >= 0")
    if tau <= 0:
        raise SimulationError("tau must be > 0")
    return math.sqrt(N) / tau


def closed_form_N(t: float, N0: float, tau: float) -> float:
    """生成則の厳密解 (sqrt(N0) + t/(2 tau))^2"""
    if t < 0:
        raise SimulationError("time must be >= 0")
    if tau <= 0:
        raise SimulationError("tau must be > 0")
    return (math.sqrt(N0) + t / (2.0 * tau)) ** 2


def derived_observables(N: float, table: ConstantsTable) -> Tuple[float, float, float, float]:
    """
    粒子数から (G, R, H, rho) を求める

    Args:
        N: 粒子数（>= 1）
        table: 定数テーブル（pion スケール）

    Returns:
        Tuple[float, float, float, float]: cgs 単位の G, R, H, rho
    """
    state = CosmologyState.from_particle_count(0.0, N, ScaleParameters.from_table(table))
    return state.G, state.R, state.H, state.rho


def _deterministic_trajectory(cfg: SimulationConfig, tau: float) -> List[float]:
    def rate(_t: float, n: float) -> float:
        return math.sqrt(n) / tau

    recorded = [cfg.N0]
    n = cfg.N0
    for step in range(1, cfg.n_steps + 1):
        n = rk4_step(rate, (step - 1) * cfg.dt, n, cfg.dt)
        if step % cfg.output_stride == 0:
            recorded.append(n)
    return recorded


def _poisson_increment(rng: np.random.Generator, mean: float) -> float:
    if mean > POISSON_NORMAL_THRESHOLD:
        return float(max(0.0, round(rng.normal(mean, math.sqrt(mean)))))
    return float(rng.poisson(mean))


def _stochastic_trajectory(cfg: SimulationConfig, tau: float, index: int) -> List[float]:
    rng = np.random.default_rng(cfg.seed + index)
    ratio = cfg.dt / tau
    recorded = [cfg.N0]
    n = cfg.N0
    for step in range(1, cfg.n_steps + 1):
        n += _poisson_increment(rng, math.sqrt(n) * ratio)
        if step % cfg.output_stride == 0:
            recorded.append(n)
    return recorded


def _run_ensemble(cfg: SimulationConfig, tau: float) -> np.ndarray:
    indices = range(cfg.ensemble_size)
    if cfg.workers > 1 and cfg.ensemble_size > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            trajectories = list(pool.map(lambda i: _stochastic_trajectory(cfg, tau, i), indices))
    else:
        trajectories = [_stochastic_trajectory(cfg, tau, i) for i in indices]
    return np.array(trajectories, dtype=float)


def run_simulation(cfg: SimulationConfig, table: ConstantsTable) -> TimeSeries:
    """
    生成則を積分して時系列を作る

    deterministic は4次 Runge-Kutta 法、stochastic は1ステップごとに
    平均 sqrt(N) dt/tau の Poisson 分布から増分を引く。軌道 i のシードは seed + i。

    Args:
        cfg: シミュレーション設定
        table: 定数テーブル

    Returns:
        TimeSeries: output_stride ステップごとのサンプル
    """
    scale = ScaleParameters.from_table(table, cfg.scale)
    if cfg.dt > scale.tau:
        raise SimulationError("step exceeds Compton time")
    logger.info(f"シミュレーション開始: mode={cfg.mode.value}, steps={cfg.n_steps}, "
                f"ensemble={cfg.ensemble_size}")

    times = [k * cfg.output_stride * cfg.dt for k in range(cfg.n_samples)]
    n_mean = n_std = None
    if cfg.mode is SimulationMode.DETERMINISTIC:
        counts = _deterministic_trajectory(cfg, scale.tau)
    else:
        ensemble = _run_ensemble(cfg, scale.tau)
        if cfg.ensemble_size > 1:
            n_mean = tuple(float(x) for x in ensemble.mean(axis=0))
            n_std = tuple(float(x) for x in ensemble.std(axis=0, ddof=1))
            counts = list(n_mean)
        else:
            counts = [float(x) for x in ensemble[0]]

    samples = tuple(
        CosmologyState.from_particle_count(t, n, scale) for t, n in zip(times, counts)
    )
    return TimeSeries(
        samples=samples,
        config=cfg,
        scale=scale,
        fingerprint=cfg.fingerprint(),
        constants_fingerprint=table.fingerprint,
        n_mean=n_mean,
        n_std=n_std,
    )


def lambda_estimate(ts: TimeSeries) -> List[LambdaSample]:
    """
    R 系列の中心差分から lambda = R''/R を求める（端点は除く）

    Args:
        ts: 3 サンプル以上の時系列

    Returns:
        List[LambdaSample]: 内部サンプルごとの (t, lambda, lambda/H^2)
    """
    if len(ts) < 3:
        raise SimulationError("too few samples for lambda estimate")
    t = np.array(ts.column("t"))
    R = np.array(ts.column("R"))
    H = np.array(ts.column("H"))
    h_minus = t[1:-1] - t[:-2]
    h_plus = t[2:] - t[1:-1]
    second = 2.0 * ((R[2:] - R[1:-1]) / h_plus - (R[1:-1] - R[:-2]) / h_minus) / (h_plus + h_minus)
    lam = second / R[1:-1]
    return [
        LambdaSample(float(tk), float(lk), float(lk / hk ** 2))
        for tk, lk, hk in zip(t[1:-1], lam, H[1:-1])
    ]


def _loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    # 0 を含む点（揺らぎで N が増えなかったステップなど）は除く
    usable = (x > 0) & (y != 0) & np.isfinite(y)
    if usable.sum() < 2:
        return math.nan
    return float(linregress(np.log10(x[usable]), np.log10(np.abs(y[usable]))).slope)


def trend_checks(ts: TimeSeries) -> TrendReport:
    """
    G ∝ 1/t・rho ∝ 1/t などの時間発展の主張を時系列から確かめる

    Args:
        ts: スケール情報を持つ時系列（10 サンプル以上、t が 2 桁以上にわたる）

    Returns:
        TrendReport: 傾きと残差
    """
    if ts.scale is None:
        raise SimulationError("time series carries no scale parameters")
    t = np.array(ts.column("t"))
    positive = t > 0
    if len(ts) < MIN_TREND_SAMPLES or positive.sum() < 2:
        raise SimulationError("insufficient span for trend checks")
    span = math.log10(t[-1] / t[positive][0])
    if span < MIN_TREND_DECADES - 1e-9:
        raise SimulationError("insufficient span for trend checks")

    l, m, c = ts.scale.l, ts.scale.m, ts.scale.c
    N = np.array(ts.column("N"))
    G = np.array(ts.column("G"))
    R = np.array(ts.column("R"))
    H = np.array(ts.column("H"))
    rho = np.array(ts.column("rho"))

    G_dot = np.gradient(G, t)
    N_dot = np.gradient(N, t)
    R_dot = np.gradient(R, t)
    first_term = G_dot * N * m / c ** 2
    second_term = G * N_dot * m / c ** 2

    tail = t >= t[-1] / 10.0
    interior = np.zeros_like(tail)
    interior[1:-1] = True
    window = tail & interior
    if window.sum() < 2:
        window = tail

    with np.errstate(divide="ignore", invalid="ignore"):
        term_ratio = float(np.mean(first_term[window] / second_term[window]))

    lambdas = lambda_estimate(ts)
    return TrendReport(
        slope_G_t=_loglog_slope(t[tail], G[tail]),
        slope_rho_t=_loglog_slope(t[tail], rho[tail]),
        slope_Gdot_N=_loglog_slope(N[window], G_dot[window]),
        term_ratio=term_ratio,
        rdot_residual=float(np.max(np.abs(R_dot[window] - H[window] * R[window])
                                   / np.abs(H[window] * R[window]))),
        r_ct_residual=float(np.max(np.abs(R[tail] - c * t[tail] / 2.0) / R[tail])),
        hubble_age=float(H[-1] * t[-1]),
        max_lambda_over_h2=max(abs(s.lam_over_h2) for s in lambdas),
        identity_residual=float(np.max(np.abs(R - l * np.sqrt(N)) / R)),
    )


def simulate(cfg: SimulationConfig, table: ConstantsTable) -> SimulationRun:
    """積分・lambda 推定・トレンド判定をまとめて行う"""
    series = run_simulation(cfg, table)
    lambdas = tuple(lambda_estimate(series)) if len(series) >= 3 else ()
    try:
        trend = trend_checks(series)
    except SimulationError as e:
        logger.warning(f"トレンド判定を省略しました: {e}")
        trend = None
    return SimulationRun(series, lambdas, trend)
