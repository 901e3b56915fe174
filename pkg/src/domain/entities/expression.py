"""
関係式の左辺・右辺を表す式木
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple

from src.domain.entities.quantity import Rational, as_rational
from src.domain.errors import ExpressionError

# 不正なレジストリ定義を弾くための深さ上限
MAX_DEPTH = 32

UNARY_OPS = ("sqrt", "log10")


class Expression:
    """式木ノードの基底クラス"""

    def children(self) -> Tuple["Expression", ...]:
        return ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children()), default=0)

    def references(self) -> FrozenSet[str]:
        """式中に現れる定数名の集合"""
        refs: FrozenSet[str] = frozenset()
        for child in self.children():
            refs |= child.references()
        return refs

    def _check_depth(self) -> None:
        if self.depth() > MAX_DEPTH:
            raise ExpressionError(f"expression depth exceeds {MAX_DEPTH}")


@dataclass(frozen=True)
class Ref(Expression):
    """定数テーブルへの参照"""
    name: str

    def references(self) -> FrozenSet[str]:
        return frozenset((self.name,))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Literal(Expression):
    """無次元の実数リテラル"""
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Product(Expression):
    factors: Tuple[Expression, ...]

    def __post_init__(self):
        if not self.factors:
            raise ExpressionError("empty product")
        object.__setattr__(self, "factors", tuple(self.factors))
        self._check_depth()

    def children(self) -> Tuple[Expression, ...]:
        return self.factors

    def __str__(self) -> str:
        return "*".join(_wrap(f) for f in self.factors)


@dataclass(frozen=True)
class Power(Expression):
    """有理数乗。除算は指数 -1 の Power で表す"""
    base: Expression
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", as_rational(self.exponent))
        self._check_depth()

    def children(self) -> Tuple[Expression, ...]:
        return (self.base,)

    def __str__(self) -> str:
        exp = self.exponent
        text = str(exp.numerator) if exp.denominator == 1 and exp >= 0 else f"({exp})"
        return f"{_wrap(self.base)}^{text}"


@dataclass(frozen=True)
class Sum(Expression):
    terms: Tuple[Expression, ...]

    def __post_init__(self):
        if not self.terms:
            raise ExpressionError("empty sum")
        object.__setattr__(self, "terms", tuple(self.terms))
        self._check_depth()

    def children(self) -> Tuple[Expression, ...]:
        return self.terms

    def __str__(self) -> str:
        return "(" + " + ".join(str(t) for t in self.terms) + ")"


@dataclass(frozen=True)
class Unary(Expression):
    """sqrt または log10"""
    op: str
    operand: Expression

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ExpressionError(f"unknown function {self.op!r}")
        self._check_depth()

    def children(self) -> Tuple[Expression, ...]:
        return (self.operand,)

    def __str__(self) -> str:
        return f"{self.op}({self.operand})"


def _wrap(e: Expression) -> str:
    return str(e) if isinstance(e, (Ref, Literal, Unary)) else f"({e})"


def ratio(numerator: Expression, denominator: Expression) -> Expression:
    return Product((numerator, Power(denominator, -1)))


def power(base: Expression, exponent: Rational) -> Power:
    return Power(base, as_rational(exponent))


def constant_exponents(expr: Expression) -> Optional[Dict[str, Fraction]]:
    """
    積と冪だけでできた式について、各定数の正味の指数を求める

    Args:
        expr: 式木

    Returns:
        Optional[Dict[str, Fraction]]: 定数名 → 指数。和や log10 を含む場合は None
    """
    if isinstance(expr, Ref):
        return {expr.name: Fraction(1)}
    if isinstance(expr, Literal):
        return {}
    if isinstance(expr, Product):
        total: Dict[str, Fraction] = {}
        for factor in expr.factors:
            sub = constant_exponents(factor)
            if sub is None:
                return None
            for name, exp in sub.items():
                total[name] = total.get(name, Fraction(0)) + exp
        return {k: v for k, v in total.items() if v}
    if isinstance(expr, Power):
        sub = constant_exponents(expr.base)
        if sub is None:
            return None
        return {k: v * expr.exponent for k, v in sub.items() if v * expr.exponent}
    if isinstance(expr, Unary) and expr.op == "sqrt":
        sub = constant_exponents(expr.operand)
        if sub is None:
            return None
        return {k: v / 2 for k, v in sub.items()}
    return None
