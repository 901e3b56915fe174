"""
CLI 呼び出し1回分の設定を表すエンティティ
"""
import math
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from src.domain.entities.cosmology_state import Scale, SimulationConfig, SimulationMode
from src.domain.errors import InvocationError

SUBCOMMANDS = ("check", "simulate", "algebra", "constants", "report", "particles")
FORMATS = ("text", "csv", "json")

_TIME_VALUE = re.compile(r"^\s*(?P<value>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(?P<tau>tau)?\s*$")


@dataclass(frozen=True)
class TimeValue:
    """秒または pion Compton 時間の倍数で表した時間"""
    value: float
    in_tau: bool = False

    @classmethod
    def parse(cls, text: Any) -> "TimeValue":
        """
        "0.1tau" や "4.7e-25" を解釈する

        Args:
            text: 文字列または数値

        Returns:
            TimeValue: 解釈した時間
        """
        if isinstance(text, (int, float)):
            return cls(float(text))
        match = _TIME_VALUE.match(str(text))
        if not match:
            raise InvocationError(f"invalid time value {text!r}")
        return cls(float(match.group("value")), match.group("tau") is not None)

    def seconds(self, tau: float) -> float:
        return self.value * tau if self.in_tau else self.value

    def __str__(self) -> str:
        return f"{self.value!r}tau" if self.in_tau else repr(self.value)


@dataclass(frozen=True)
class SimulationSettings:
    N0: float = 1.0
    dt: TimeValue = TimeValue(0.1, True)
    t_end: TimeValue = TimeValue(1000.0, True)
    steps: Optional[int] = None
    mode: SimulationMode = SimulationMode.DETERMINISTIC
    seed: Optional[int] = None
    ensemble_size: int = 1
    output_stride: int = 1
    scale: Scale = Scale.PION
    workers: int = 1

    def to_config(self, tau: float) -> SimulationConfig:
        """
        tau を使って秒単位の SimulationConfig に変換する

        steps が指定されていれば t_end = steps × dt。
        """
        dt = self.dt.seconds(tau)
        t_end = self.steps * dt if self.steps is not None else self.t_end.seconds(tau)
        return SimulationConfig(
            t_end=t_end,
            dt=dt,
            N0=self.N0,
            mode=self.mode,
            seed=self.seed,
            ensemble_size=self.ensemble_size,
            output_stride=self.output_stride,
            scale=self.scale,
            workers=self.workers,
        )


@dataclass(frozen=True)
class InvocationConfig:
    """サブコマンド1つ分の不変な呼び出し設定"""
    subcommand: str
    constants_path: Optional[str] = None
    relations_path: Optional[str] = None
    relation_filter: Tuple[str, ...] = ()
    tolerance_overrides: Dict[str, float] = field(default_factory=dict)
    simulation: SimulationSettings = SimulationSettings()
    suites: Tuple[str, ...] = ("clifford", "onshell", "snyder")
    trials: int = 1000
    algebra_seed: int = 7
    alpha: float = 1.0
    beta_scale: float = 1.0
    mass_key: str = "m_pi"
    potential_range: Optional[str] = None
    output_format: str = "text"
    output_path: Optional[str] = None
    workers: int = 1
    verbose: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InvocationError(f"unknown subcommand {self.subcommand}")
        if self.output_format not in FORMATS:
            raise InvocationError(f"unknown format {self.output_format}")
        if self.trials < 1:
            raise InvocationError("trials must be >= 1")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "InvocationConfig":
        """CLI 引数と設定ファイルをマージした辞書からモデルを作る"""
        sim = config_dict.get("simulation", {}) or {}
        steps = sim.get("steps")
        simulation = SimulationSettings(
            N0=float(sim.get("N0", 1.0)),
            dt=TimeValue.parse(sim.get("dt", "0.1tau")),
            t_end=TimeValue.parse(sim.get("t_end", "1000tau")),
            steps=_as_count(steps, "steps") if steps is not None else None,
            mode=_enum(SimulationMode, sim.get("mode", "deterministic"), "mode"),
            seed=_as_seed(sim.get("seed")),
            ensemble_size=_as_count(sim.get("ensemble_size", 1), "ensemble"),
            output_stride=_as_count(sim.get("output_stride", 1), "stride"),
            scale=_enum(Scale, sim.get("scale", "pion"), "scale"),
            workers=_as_count(sim.get("workers", 1), "workers"),
        )
        particles = config_dict.get("particles", {}) or {}
        return cls(
            subcommand=config_dict.get("subcommand", "check"),
            constants_path=config_dict.get("constants_path"),
            relations_path=config_dict.get("relations_path"),
            relation_filter=tuple(config_dict.get("relation_filter") or ()),
            tolerance_overrides={k: float(v) for k, v in
                                 (config_dict.get("tolerance_overrides") or {}).items()},
            simulation=simulation,
            suites=tuple(config_dict.get("suites") or ("clifford", "onshell", "snyder")),
            trials=_as_count(config_dict.get("trials", 1000), "trials"),
            algebra_seed=_as_seed(_first(config_dict.get("algebra_seed"), 7)),
            alpha=float(particles.get("alpha", 1.0)),
            beta_scale=float(particles.get("beta_scale", 1.0)),
            mass_key=particles.get("mass_key", "m_pi"),
            potential_range=particles.get("potential_range"),
            output_format=config_dict.get("output_format", "text"),
            output_path=config_dict.get("output_path"),
            workers=_as_count(config_dict.get("workers", 1), "workers"),
            verbose=bool(config_dict.get("verbose", False)),
        )


def _as_count(value: Any, name: str) -> int:
    """"1e4" のような表記も受け付ける正の整数"""
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise InvocationError(f"{name} must be a positive integer, got {value!r}") from e
    if not math.isfinite(number) or number < 1 or number != int(number):
        raise InvocationError(f"{name} must be a positive integer, got {value!r}")
    return int(number)


def _as_seed(value: Any) -> Optional[int]:
    if value is None:
        return None
    try:
        seed = int(value)
    except (TypeError, ValueError) as e:
        raise InvocationError(f"seed must be an unsigned 64-bit integer, got {value!r}") from e
    if not 0 <= seed < 2 ** 64:
        raise InvocationError(f"seed must be an unsigned 64-bit integer, got {value!r}")
    return seed


def _enum(enum_cls, value: Any, name: str):
    try:
        return enum_cls(value)
    except ValueError as e:
        raise InvocationError(f"unknown {name} {value!r}") from e


def _first(value: Any, default: Any) -> Any:
    return default if value is None else value
