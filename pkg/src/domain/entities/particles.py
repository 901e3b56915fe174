"""
素粒子セクターのエンティティ
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from src.domain.entities.quantity import Quantity
from src.domain.entities.relation import CheckResult
from src.domain.errors import ParticleError


@dataclass(frozen=True)
class PotentialParams:
    """
    QCD 型ポテンシャル -alpha/r + beta r のパラメータ

    自然単位（hbar = c = 1）で、質量・エネルギーは mass_scale を 1 とする。
    したがって r の単位は hbar/(mass_scale c)、beta の単位は mass_scale^2。
    """
    alpha: float
    beta: float
    mass_scale: float

    def __post_init__(self):
        for name in ("alpha", "beta", "mass_scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParticleError(f"{name} must be > 0")


@dataclass(frozen=True)
class ChargeFraction:
    """d 次元に広がった電荷は e の d/3"""
    dims: int
    fraction: Fraction

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise ParticleError(f"dims must be 1, 2 or 3, got {self.dims}")
        if self.fraction != Fraction(self.dims, 3):
            raise ParticleError("charge fraction must equal dims/3")


@dataclass(frozen=True)
class QuarkMassEstimate:
    mass: Quantity
    ratio_to_electron: float
    alpha_over_9: float
    mass_gev: float


@dataclass(frozen=True)
class WeakCouplingRecord:
    """弱結合に関する値と、レジストリと同じ判定結果"""
    fermi_coupling: Quantity
    g2_lw2_from_neutrinos: float
    g2_lw2_asserted: float
    g2_lw2_table: Quantity
    table_product_gap: float
    results: Tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)


@dataclass(frozen=True)
class FarFieldPotentials:
    """
    Compton 長より十分遠い距離 r での重力と電気の相互作用エネルギー

    gravitational = G m^2 / r、electric = e^2 / r。比は r に依らない。
    """
    radius: Quantity
    compton_lengths: float
    gravitational: Quantity
    electric: Quantity
    strength_ratio: float


@dataclass(frozen=True)
class ParticleSummary:
    """particles サブコマンドの出力一式"""
    potential: PotentialParams
    crossover_radius: float
    charges: Tuple[Tuple[ChargeFraction, Quantity], ...]
    quark: QuarkMassEstimate
    weak: WeakCouplingRecord
    zpf_pion: Quantity
    zpf_planck: Quantity
    far_field: FarFieldPotentials
    potential_rows: Optional[Tuple[Tuple[float, float, float], ...]] = None
