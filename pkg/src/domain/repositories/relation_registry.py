"""
組み込みの関係式レジストリ

ID と既定の許容桁数は固定。式は中置記法で書き、読み込み時に式木へ変換する。
"""
from typing import Iterable, List, Optional, Tuple

from src.domain.entities.expression import Expression
from src.domain.entities.expression_parser import parse_expression
from src.domain.entities.relation import DimensionPolicy, Relation
from src.domain.errors import RelationError

S = DimensionPolicy.STRICT
W = DimensionPolicy.WAIVED

_WEAK_UNITS_NOTE = "coupling quoted per gram squared; compared as written"
_NEUTRINO_PRINTED_NOTE = (
    "printed form multiplies by l_w^2 instead of dividing by a length; "
    "uses the asserted g2_lw2 value as written"
)
_NEUTRINO_NUMERIC_NOTE = (
    "g^2 l_w^2 solved from the neutrino relation as m_nu c^2/sqrt(N_nu); "
    "compared to the bare number 1e-59"
)

# 入力として使う主張値を、表の他の値から計算した値と突き合わせる
_INPUT_CHECKS = {
    "E35": ("g2_lw2", "g2 * l_w^2", "g2_lw2"),
}

# (id, 説明, 左辺, 右辺, 許容桁数, 次元方針, 免除理由, 出典メモ)
_BUILTIN: Tuple[Tuple[str, str, str, str, float, DimensionPolicy, str, str], ...] = (
    ("E1", "宇宙半径 = ランダムウォーク半径", "R_obs", "l_pi * sqrt(N)", 1.5, S, "",
     "Brownian random-walk radius"),
    ("E2", "宇宙年齢 = Compton 時間のランダムウォーク", "T_obs", "tau_pi * sqrt(N)", 1.0, S, "",
     "pion Compton time"),
    ("E3", "宇宙の質量 = 粒子数 × 粒子質量", "M_obs", "N * m_pi", 2.5, S, "",
     "mass of the universe"),
    ("E17", "重力と電磁気力の強さの比", "e^2 / (G * m_pi^2)", "1e40", 3.0, S, "",
     "gravitational vs electromagnetic strength"),
    ("E21", "Fermi の局所弱結合定数", "g2 / m_w^2", "1e-5 / m_p^2", 2.0, W, _WEAK_UNITS_NOTE,
     "Fermi weak coupling"),
    ("E22", "宇宙半径 = 重力半径", "R_obs", "G * N * m_pi / c^2", 1.5, S, "",
     "pion rest energy balance"),
    ("E26", "Weinberg の公式（Hubble 定数）", "H_obs", "G * m_pi^3 * c / (2 * hbar^2)", 1.5, S, "",
     "Hubble constant from the pion mass"),
    ("E28", "静電エネルギーから得る半径", "R_obs", "sqrt(N) * l_pi", 1.5, S, "",
     "extra electrostatic energy"),
    ("E29", "大数仮説: sqrt(N) ~ 強さの比", "sqrt(N)", "e^2 / (G * m_pi^2)", 3.0, S, "",
     "large-number coincidence"),
    ("E30", "G と粒子数の関係", "G * m_pi / (l_pi * c^2)", "1 / sqrt(N)", 1.5, S, "",
     "G from the particle number"),
    ("E32", "Hubble 定数の導出", "H_obs", "c / (l_pi * sqrt(N))", 1.5, S, "",
     "Hubble constant from the particle number"),
    ("E33", "密度の減少則", "m_pi / l_pi^3 / sqrt(N)", "rho_obs", 3.0, S, "",
     "decreasing density"),
    ("E34", "Planck 密度 × Compton 体積 = 宇宙の質量", "rho_planck * l_pi^3", "N * m_pi", 2.5, S, "",
     "Planck density coincidence"),
    ("P1", "Compton 体積中の Planck 質量の数", "rho_planck * l_pi^3 / m_planck", "1e60", 1.0, S, "",
     "number of Planck masses"),
    ("P2", "Compton 時間中の Planck 寿命の数", "tau_pi / tau_planck", "1e20", 1.0, S, "",
     "Planck lifetimes"),
    ("P3", "Planck 粒子の総数 = 全粒子数", "(rho_planck * l_pi^3 / m_planck) * (tau_pi / tau_planck)",
     "1e80", 1.0, S, "", "total particle number"),
    ("E35", "ニュートリノ数からの弱結合（記載形）", "g2_lw2 * sqrt(N_nu)", "m_nu * c^2", 1.5, W,
     _NEUTRINO_PRINTED_NOTE, "number of neutrinos"),
    ("E35b", "ニュートリノから戻る弱結合定数", "m_nu * c^2 / sqrt(N_nu)", "1e-59", 1.5, W,
     _NEUTRINO_NUMERIC_NOTE, "weak coupling recovered from neutrinos"),
    ("Z1", "ゼロ点場の揺らぎのエネルギー", "(hbar * c / l_pi^4) * l_pi^3", "m_pi * c^2", 0.5, S, "",
     "zero-point fluctuation energy"),
    ("QM", "クォークと電子の質量比", "9 * hbar * c / e^2", "1e3", 1.0, S, "",
     "quark mass estimate"),
    ("RCT", "R = cT（光速の出現）", "R_obs", "c * T_obs", 1.0, S, "",
     "emergence of the speed of light"),
)


def _input_check(rid: str) -> Optional[Tuple[str, Expression, Expression]]:
    if rid not in _INPUT_CHECKS:
        return None
    label, computed, asserted = _INPUT_CHECKS[rid]
    return label, parse_expression(computed), parse_expression(asserted)


def builtin_registry() -> List[Relation]:
    """
    組み込みの関係式を登録順に返す

    Returns:
        List[Relation]: 21 件の関係式（呼び出しごとに新しいリスト）
    """
    return [
        Relation(
            id=rid,
            description=desc,
            lhs=parse_expression(lhs),
            rhs=parse_expression(rhs),
            tolerance_decades=tol,
            dimension_policy=policy,
            waiver_note=note,
            ref=ref,
            input_check=_input_check(rid),
        )
        for rid, desc, lhs, rhs, tol, policy, note, ref in _BUILTIN
    ]


def builtin_ids() -> Tuple[str, ...]:
    return tuple(entry[0] for entry in _BUILTIN)


def extend_registry(builtin: Iterable[Relation], extra: Iterable[Relation]) -> List[Relation]:
    """組み込みレジストリの後ろにユーザー定義を追加する。ID の衝突はエラー"""
    merged = list(builtin)
    ids = {r.id for r in merged}
    for r in extra:
        if r.id in ids:
            raise RelationError(f"relation id {r.id} collides with an existing entry")
        ids.add(r.id)
        merged.append(r)
    return merged
