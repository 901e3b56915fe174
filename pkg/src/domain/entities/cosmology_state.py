"""
宇宙論シミュレーションの状態・設定・時系列を表すエンティティ
"""
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from src.domain.entities.constants_table import ConstantsTable
from src.domain.errors import SimulationError


class SimulationMode(str, Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"


class Scale(str, Enum):
    """生成則の時計に使うスケール"""
    PION = "pion"
    PLANCK = "planck"


# スケールごとの (長さ, 時間, 質量) のキー
_SCALE_KEYS = {
    Scale.PION: ("l_pi", "tau_pi", "m_pi"),
    Scale.PLANCK: ("l_planck", "tau_planck", "m_planck"),
}


@dataclass(frozen=True)
class ScaleParameters:
    """長さ l、時間 tau、質量 m と光速 c（すべて cgs の数値）"""
    l: float
    tau: float
    m: float
    c: float

    @classmethod
    def from_table(cls, table: ConstantsTable, scale: Scale = Scale.PION) -> "ScaleParameters":
        l_key, tau_key, m_key = _SCALE_KEYS[Scale(scale)]
        return cls(
            l=table[l_key].magnitude,
            tau=table[tau_key].magnitude,
            m=table[m_key].magnitude,
            c=table["c"].magnitude,
        )


@dataclass(frozen=True)
class CosmologyState:
    """ある時刻の宇宙（N から導出した G, R, H, rho を含む）"""
    t: float
    N: float
    G: float
    R: float
    H: float
    rho: float

    def __post_init__(self):
        if self.N < 1:
            raise SimulationError(f"particle count must be >= 1, got {self.N}")

    @classmethod
    def from_particle_count(cls, t: float, N: float, scale: ScaleParameters) -> "CosmologyState":
        """
        粒子数から観測量を導出して状態を作る

        G = l c^2/(m sqrt(N))、R = G N m/c^2、H = c/(l sqrt(N))、rho = (m/l^3)/sqrt(N)
        """
        if N < 1:
            raise SimulationError(f"particle count must be >= 1, got {N}")
        root = math.sqrt(N)
        l, m, c = scale.l, scale.m, scale.c
        G = l * c * c / (m * root)
        return cls(
            t=t,
            N=N,
            G=G,
            R=G * (N * m) / (c * c),
            H=c / (l * root),
            rho=(m / l ** 3) / root,
        )


@dataclass(frozen=True)
class SimulationConfig:
    """
    シミュレーション設定

    時間はすべて秒。stochastic モードではシードが必須。
    """
    t_end: float
    dt: float
    N0: float = 1.0
    mode: SimulationMode = SimulationMode.DETERMINISTIC
    seed: Optional[int] = None
    ensemble_size: int = 1
    output_stride: int = 1
    scale: Scale = Scale.PION
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", SimulationMode(self.mode))
        object.__setattr__(self, "scale", Scale(self.scale))
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise SimulationError("dt must be > 0")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise SimulationError("t_end must be > 0")
        if not (math.isfinite(self.N0) and self.N0 >= 1):
            raise SimulationError("N0 must be >= 1")
        if self.ensemble_size < 1:
            raise SimulationError("ensemble_size must be >= 1")
        if self.output_stride < 1:
            raise SimulationError("output_stride must be >= 1")
        if self.workers < 1:
            raise SimulationError("workers must be >= 1")
        if self.mode is SimulationMode.STOCHASTIC and self.seed is None:
            raise SimulationError("stochastic mode requires seed")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise SimulationError("seed must be an unsigned 64-bit integer")

    @property
    def n_steps(self) -> int:
        # 100tau / (tau/10) のような丸め誤差を吸収する
        return int(math.floor(self.t_end / self.dt + 1e-9))

    @property
    def n_samples(self) -> int:
        return self.n_steps // self.output_stride + 1

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["mode"] = self.mode.value
        data["scale"] = self.scale.value
        return data

    def fingerprint(self) -> str:
        """ワーカー数を除いた設定の SHA-256"""
        data = self.as_dict()
        data.pop("workers")
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TimeSeries:
    """サンプル列。アンサンブルの場合は N の平均と標準偏差を持つ"""
    samples: Tuple[CosmologyState, ...]
    config: Optional[SimulationConfig] = None
    scale: Optional[ScaleParameters] = None
    fingerprint: str = ""
    constants_fingerprint: str = ""
    n_mean: Optional[Tuple[float, ...]] = None
    n_std: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        times = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise SimulationError("sample times must be strictly increasing")
        for stats in (self.n_mean, self.n_std):
            if stats is not None and len(stats) != len(self.samples):
                raise SimulationError("ensemble statistics length differs from sample count")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def is_ensemble(self) -> bool:
        return self.n_mean is not None

    def column(self, name: str) -> List[float]:
        return [getattr(s, name) for s in self.samples]


@dataclass(frozen=True)
class LambdaSample:
    t: float
    lam: float
    lam_over_h2: float


@dataclass(frozen=True)
class TrendReport:
    """
    時間発展に関する主張の数値チェック

    傾きは最後の1桁分（t >= t_last/10）のサンプルで求める。
    """
    slope_G_t: float
    slope_rho_t: float
    slope_Gdot_N: float
    term_ratio: float
    rdot_residual: float
    r_ct_residual: float
    hubble_age: float
    max_lambda_over_h2: float
    identity_residual: float

    def slopes_within(self, tolerance: float) -> bool:
        return abs(self.slope_G_t + 1) <= tolerance and abs(self.slope_rho_t + 1) <= tolerance


@dataclass(frozen=True)
class SimulationRun:
    """simulate サブコマンドの出力一式"""
    series: TimeSeries
    lambdas: Tuple[LambdaSample, ...] = field(default_factory=tuple)
    trend: Optional[TrendReport] = None
