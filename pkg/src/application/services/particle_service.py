"""
素粒子セクター（QCD 型ポテンシャル・分数電荷・クォーク質量・弱結合・ゼロ点エネルギー）の評価
"""
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.application.services.relation_service import check_relation
from src.config.logger import get_module_logger
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.particles import (
    ChargeFraction, FarFieldPotentials, ParticleSummary, PotentialParams, QuarkMassEstimate, WeakCouplingRecord,
)
from src.domain.entities.quantity import LENGTH, Quantity, log_ratio
from src.domain.errors import ParticleError
from src.domain.repositories.relation_registry import builtin_registry

logger = get_module_logger("particles")

ERG_PER_GEV = 1.602176634e-3
QUARK_TO_ELECTRON = 1e3
WEAK_RELATIONS = ("E21", "E35", "E35b")
_WEAK_KEYS = ("g2", "m_w", "l_w", "m_nu", "c", "g2_lw2")

PotentialRow = Tuple[float, float, float]


def potential_params(table: ConstantsTable, alpha: float = 1.0, beta_scale: float = 1.0,
                     mass_key: str = "m_pi") -> PotentialParams:
    """
    alpha ~ O(1)、beta ~ O(m^2) の既定パラメータを作る

    mass_scale = table[mass_key] なので自然単位での m は 1、beta = beta_scale。
    """
    if mass_key not in table:
        raise ParticleError(f"missing key {mass_key}")
    return PotentialParams(alpha, beta_scale, table[mass_key].magnitude)


def qcd_potential(r: float, p: PotentialParams) -> float:
    """V(r) = -alpha/r + beta r（自然単位）"""
    if r <= 0:
        raise ParticleError("radius must be > 0")
    return -p.alpha / r + p.beta * r


def qcd_potential_cgs(r_cm: float, p: PotentialParams, table: ConstantsTable) -> float:
    """半径 (cm) から V (erg) を求める"""
    hbar = table["hbar"].magnitude
    c = table["c"].magnitude
    unit_length = hbar / (p.mass_scale * c)
    return qcd_potential(r_cm / unit_length, p) * p.mass_scale * c * c


def crossover_radius(p: PotentialParams) -> float:
    """クーロン項と閉じ込め項が釣り合う r* = sqrt(alpha/beta)"""
    return math.sqrt(p.alpha / p.beta)


def potential_table(radii: Iterable[float], p: PotentialParams,
                    table: ConstantsTable) -> List[PotentialRow]:
    """
    (r, V_natural, V_cgs) の表を作る

    Args:
        radii: 自然単位の半径
        p: ポテンシャルのパラメータ
        table: 定数テーブル（c を使う）

    Returns:
        List[PotentialRow]: 行のリスト。V_cgs は erg
    """
    energy_unit = p.mass_scale * table["c"].magnitude ** 2
    rows = []
    for r in radii:
        v = qcd_potential(float(r), p)
        rows.append((float(r), v, v * energy_unit))
    return rows


def parse_radius_range(text: str) -> List[float]:
    """"RMIN:RMAX:COUNT" を対数等間隔の半径列にする"""
    try:
        r_min, r_max, count = text.split(":")
        r_min, r_max, count = float(r_min), float(r_max), int(count)
    except ValueError as e:
        raise ParticleError(f"invalid radius range {text!r}, expected RMIN:RMAX:COUNT") from e
    if r_min <= 0 or r_max < r_min or count < 1:
        raise ParticleError(f"invalid radius range {text!r}")
    if count == 1:
        return [r_min]
    return [float(r) for r in np.geomspace(r_min, r_max, count)]


def charge_fraction(dims: int) -> ChargeFraction:
    """d 次元（1..3）に対応する電荷 d/3 e"""
    if dims not in (1, 2, 3):
        raise ParticleError(f"dims out of range: {dims}")
    return ChargeFraction(dims, Fraction(dims, 3))


def charge_of(fraction: ChargeFraction, table: ConstantsTable) -> Quantity:
    return float(fraction.fraction) * table["e"]


def fine_structure(table: ConstantsTable) -> float:
    """e^2/(hbar c)"""
    alpha = table["e"] ** 2 / (table["hbar"] * table["c"])
    if not alpha.dim.is_dimensionless:
        raise ParticleError(f"fine-structure constant is not dimensionless: {alpha.dim}")
    return alpha.magnitude


def natural_mass_gev(mass: Quantity, table: ConstantsTable) -> float:
    """質量 (g) を GeV/c^2 で表す"""
    energy = mass * table["c"] ** 2
    return energy.magnitude / ERG_PER_GEV


def quark_mass_estimate(table: ConstantsTable) -> QuarkMassEstimate:
    """
    e^2/9 ~ 1e-3 からクォーク質量を 1e3 m_e と見積もる

    e^2 は無次元の組み合わせ e^2/(hbar c) として読む。
    """
    mass = QUARK_TO_ELECTRON * table["m_e"]
    return QuarkMassEstimate(
        mass=mass,
        ratio_to_electron=QUARK_TO_ELECTRON,
        alpha_over_9=fine_structure(table) / 9.0,
        mass_gev=natural_mass_gev(mass, table),
    )


def weak_coupling_check(table: ConstantsTable) -> WeakCouplingRecord:
    """
    弱結合の関係式 E21・E35・E35b をレジストリと同じ判定で評価する

    Args:
        table: g2, m_w, l_w, N_nu, m_nu を含む定数テーブル

    Returns:
        WeakCouplingRecord: 値と判定結果
    """
    n_nu = table.get("N_nu")
    if n_nu is None or n_nu.magnitude == 0:
        raise ParticleError("missing or zero N_nu")
    for key in _WEAK_KEYS:
        if key not in table:
            raise ParticleError(f"missing key {key}")

    relations = {r.id: r for r in builtin_registry() if r.id in WEAK_RELATIONS}
    results = tuple(check_relation(relations[rid], table) for rid in WEAK_RELATIONS)

    from_neutrinos = (table["m_nu"] * table["c"] ** 2).magnitude / math.sqrt(n_nu.magnitude)
    asserted = table["g2_lw2"].magnitude
    table_product = table["g2"] * table["l_w"] ** 2
    gap = abs(log_ratio(Quantity(table_product.magnitude), Quantity(asserted)))
    logger.debug(f"g2 l_w^2 の表の値は主張値から {gap:.1f} 桁離れています")
    return WeakCouplingRecord(
        fermi_coupling=table["g2"] / table["m_w"] ** 2,
        g2_lw2_from_neutrinos=from_neutrinos,
        g2_lw2_asserted=asserted,
        g2_lw2_table=table_product,
        table_product_gap=gap,
        results=results,
    )


def zpf_energy(l: Quantity, table: ConstantsTable) -> Quantity:
    """大きさ l の領域のゼロ点揺らぎのエネルギー hbar c / l (erg)"""
    if l.dim != LENGTH:
        raise ParticleError(f"length expected, got {l.dim}")
    if l.magnitude <= 0:
        raise ParticleError("length must be > 0")
    return (table["hbar"] * table["c"]) / l


FAR_FIELD_COMPTON_LENGTHS = 1e3


def far_field_potentials(table: ConstantsTable, compton_lengths: float = FAR_FIELD_COMPTON_LENGTHS,
                         mass_key: str = "m_pi") -> FarFieldPotentials:
    """
    Compton 長の compton_lengths 倍の距離での重力・電気の相互作用エネルギー

    遠方では重力は G m^2/r、電気は e^2/r の 1/r 則になり、比は強さの比 e^2/(G m^2) に一致する。

    Args:
        table: hbar, c, G, e と mass_key を含む定数テーブル
        compton_lengths: 距離（Compton 長 hbar/(m c) 単位、1 より大きいこと）
        mass_key: 粒子質量のキー

    Returns:
        FarFieldPotentials: 距離と両エネルギー (erg)
    """
    if not (math.isfinite(compton_lengths) and compton_lengths > 1):
        raise ParticleError("far-field distance must exceed one Compton length")
    for key in ("hbar", "c", "G", "e", mass_key):
        if key not in table:
            raise ParticleError(f"missing key {key}")
    m = table[mass_key]
    radius = compton_lengths * (table["hbar"] / (m * table["c"]))
    gravitational = table["G"] * m ** 2 / radius
    electric = table["e"] ** 2 / radius
    return FarFieldPotentials(
        radius=radius,
        compton_lengths=compton_lengths,
        gravitational=gravitational,
        electric=electric,
        strength_ratio=electric.magnitude / gravitational.magnitude,
    )


def particle_summary(table: ConstantsTable, params: Optional[PotentialParams] = None,
                     radii: Optional[Iterable[float]] = None) -> ParticleSummary:
    """particles サブコマンド用に各値をまとめる"""
    params = params or potential_params(table)
    charges = tuple((charge_fraction(d), charge_of(charge_fraction(d), table)) for d in (1, 2, 3))
    rows = tuple(potential_table(radii, params, table)) if radii is not None else None
    return ParticleSummary(
        potential=params,
        crossover_radius=crossover_radius(params),
        charges=charges,
        quark=quark_mass_estimate(table),
        weak=weak_coupling_check(table),
        zpf_pion=zpf_energy(table["l_pi"], table),
        zpf_planck=zpf_energy(table["l_planck"], table),
        far_field=far_field_potentials(table),
        potential_rows=rows,
    )
