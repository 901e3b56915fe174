"""
派生定数の計算規則

辞書の挿入順が依存関係の順序になっている（後の規則は前の結果を参照してよい）。
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Mapping, Tuple

from src.domain.entities.quantity import Quantity

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DerivationRule:
    """派生定数1つの依存キーと計算式"""
    name: str
    depends_on: Tuple[str, ...]
    compute: Callable[[Mapping[str, Quantity]], Quantity]
    formula: str


def _rule(name: str, depends_on: Tuple[str, ...], formula: str):
    def decorator(fn: Callable[[Mapping[str, Quantity]], Quantity]) -> DerivationRule:
        return DerivationRule(name, depends_on, fn, formula)
    return decorator


@_rule("l_pi", ("hbar", "m_pi", "c"), "hbar/(m_pi c)")
def _l_pi(v):
    return v["hbar"] / (v["m_pi"] * v["c"])


@_rule("tau_pi", ("l_pi", "c"), "l_pi/c")
def _tau_pi(v):
    return v["l_pi"] / v["c"]


@_rule("m_planck", ("hbar", "c", "G"), "(hbar c/G)^1/2")
def _m_planck(v):
    return (v["hbar"] * v["c"] / v["G"]) ** HALF


@_rule("l_planck", ("hbar", "G", "c"), "(hbar G/c^3)^1/2")
def _l_planck(v):
    return (v["hbar"] * v["G"] / v["c"] ** 3) ** HALF


@_rule("tau_planck", ("l_planck", "c"), "l_planck/c")
def _tau_planck(v):
    return v["l_planck"] / v["c"]


@_rule("rho_planck", ("m_planck", "l_planck"), "m_planck/l_planck^3")
def _rho_planck(v):
    return v["m_planck"] / v["l_planck"] ** 3


@_rule("m_nu", ("m_e",), "1e-8 m_e")
def _m_nu(v):
    return 1e-8 * v["m_e"]


@_rule("m_w", ("m_p",), "100 m_p")
def _m_w(v):
    return 100.0 * v["m_p"]


@_rule("l_w", ("hbar", "m_w", "c"), "hbar/(m_w c)")
def _l_w(v):
    return v["hbar"] / (v["m_w"] * v["c"])


DERIVATION_RULES: Dict[str, DerivationRule] = {
    rule.name: rule
    for rule in (_l_pi, _tau_pi, _m_planck, _l_planck, _tau_planck,
                 _rho_planck, _m_nu, _m_w, _l_w)
}
