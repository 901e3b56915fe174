"""
cgs-Gauss 単位系における次元付き量を表すエンティティ
"""
import math
import re
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Dict, List, Union

from src.domain.errors import DimensionMismatchError, QuantityError

# 有理数指数の分母の上限
MAX_DENOMINATOR = 12

Rational = Union[int, Fraction, str]

_UNIT_TOKEN = re.compile(r"^(g|cm|s|esu)(?:\^(-?\d+)(?:/(\d+))?)?$")


def as_rational(value: Rational) -> Fraction:
    """
    指数を既約な有理数に正規化する

    Args:
        value: 整数・Fraction・"1/3" のような文字列

    Returns:
        Fraction: 既約形の有理数
    """
    if isinstance(value, float):
        raise QuantityError(f"exponent must be exact, got float {value!r}")
    try:
        r = Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise QuantityError(f"invalid rational exponent {value!r}") from e
    if r.denominator > MAX_DENOMINATOR:
        raise QuantityError(
            f"exponent denominator exceeds {MAX_DENOMINATOR}: {r}")
    return r


def _format_exponent(symbol: str, exp: Fraction) -> str:
    if exp == 1:
        return symbol
    if exp.denominator == 1:
        return f"{symbol}^{exp.numerator}"
    return f"{symbol}^{exp.numerator}/{exp.denominator}"


@dataclass(frozen=True)
class Dimension:
    """質量・長さ・時間・電荷の4基本次元の有理数指数"""
    mass_exp: Fraction = Fraction(0)
    length_exp: Fraction = Fraction(0)
    time_exp: Fraction = Fraction(0)
    charge_exp: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, as_rational(getattr(self, f.name)))

    @property
    def is_dimensionless(self) -> bool:
        return not (self.mass_exp or self.length_exp or self.time_exp or self.charge_exp)

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(
            self.mass_exp + other.mass_exp,
            self.length_exp + other.length_exp,
            self.time_exp + other.time_exp,
            self.charge_exp + other.charge_exp,
        )

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return self * other.scale(-1)

    def scale(self, r: Rational) -> "Dimension":
        """全指数を r 倍した次元を返す"""
        r = as_rational(r)
        return Dimension(
            self.mass_exp * r,
            self.length_exp * r,
            self.time_exp * r,
            self.charge_exp * r,
        )

    @classmethod
    def parse(cls, unit_expr: str) -> "Dimension":
        """
        単位式（例: "g cm^2 s^-1"）を次元に変換する

        esu は Gauss 単位系の定義に従い g^1/2 cm^3/2 s^-1 に還元する。

        Args:
            unit_expr: g, cm, s, esu の積。"1" は無次元

        Returns:
            Dimension: 対応する次元
        """
        text = unit_expr.strip()
        if text == "1":
            return DIMENSIONLESS
        tokens = [t for t in re.split(r"[\s*]+", text) if t]
        if not tokens:
            raise QuantityError(f"empty unit expression {unit_expr!r}")
        result = DIMENSIONLESS
        for token in tokens:
            match = _UNIT_TOKEN.match(token)
            if not match:
                raise QuantityError(f"unknown unit token {token!r}")
            symbol, num, den = match.groups()
            if den is not None and int(den) == 0:
                raise QuantityError(f"zero denominator in unit token {token!r}")
            exp =Fraction(int(num) if num else 1, int(den) if den else 1)
            result = result * UNIT_DIMENSIONS[symbol].scale(as_rational(exp))
        return result

    def _parts(self) -> List[str]:
        return [
            _format_exponent(symbol, exp)
            for symbol, exp in (("g", self.mass_exp), ("cm", self.length_exp),
                                ("s", self.time_exp), ("Q", self.charge_exp))
            if exp
        ]

    def unit_expr(self) -> str:
        """定数ファイルの文法で書ける単位式を返す"""
        if self.charge_exp:
            raise QuantityError("charge dimension has no unit-expr token")
        return " ".join(self._parts()) or "1"

    def __str__(self) -> str:
        return " ".join(self._parts()) or "1"


DIMENSIONLESS = Dimension()
MASS = Dimension(mass_exp=1)
LENGTH = Dimension(length_exp=1)
TIME = Dimension(time_exp=1)

UNIT_DIMENSIONS: Dict[str, Dimension] = {
    "g": MASS,
    "cm": LENGTH,
    "s": TIME,
    "esu": Dimension(Fraction(1, 2), Fraction(3, 2), -1),
}


@dataclass(frozen=True)
class Quantity:
    """cgs-Gauss 単位での大きさと次元の組"""
    magnitude: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        value = float(self.magnitude)
        if math.isinf(value):
            raise QuantityError("magnitude overflow")
        if math.isnan(value):
            raise QuantityError("non-finite magnitude")
        object.__setattr__(self, "magnitude", value)

    def __mul__(self, other: "Quantity") -> "Quantity":
        return q_mul(self, _coerce(other))

    def __rmul__(self, other: float) -> "Quantity":
        return q_mul(_coerce(other), self)

    def __truediv__(self, other: "Quantity") -> "Quantity":
        return q_div(self, _coerce(other))

    def __rtruediv__(self, other: float) -> "Quantity":
        return q_div(_coerce(other), self)

    def __pow__(self, r: Rational) -> "Quantity":
        return q_pow(self, r)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.magnitude, self.dim)

    def __str__(self) -> str:
        unit = str(self.dim)
        return f"{self.magnitude:.6e}" if unit == "1" else f"{self.magnitude:.6e} {unit}"


def _coerce(value: Union[Quantity, float, int]) -> Quantity:
    return value if isinstance(value, Quantity) else Quantity(value)


def q_mul(a: Quantity, b: Quantity) -> Quantity:
    """大きさを掛け、次元の指数を足す"""
    product = a.magnitude * b.magnitude
    if not math.isfinite(product):
        raise QuantityError("magnitude overflow")
    return Quantity(product, a.dim * b.dim)


def q_div(a: Quantity, b: Quantity) -> Quantity:
    if b.magnitude == 0.0:
        raise QuantityError("magnitude overflow")
    quotient = a.magnitude / b.magnitude
    if not math.isfinite(quotient):
        raise QuantityError("magnitude overflow")
    return Quantity(quotient, a.dim / b.dim)


def q_pow(a: Quantity, r: Rational) -> Quantity:
    """
    量を有理数乗する

    負の大きさは分母が奇数の指数でのみ許される（実数の奇数乗根）。

    Args:
        a: 底となる量
        r: 有理数指数

    Returns:
        Quantity: 大きさ a^r、次元の指数は r 倍
    """
    r = as_rational(r)
    m = a.magnitude
    try:
        if m < 0:
            if r.denominator % 2 == 0:
                raise QuantityError("non-real result")
            root = (-m) ** float(r)
            value = -root if r.numerator % 2 else root
        else:
            value = m ** float(r)
    except (OverflowError, ZeroDivisionError) as e:
        raise QuantityError("magnitude overflow") from e
    return Quantity(value, a.dim.scale(r))


def q_add(a: Quantity, b: Quantity) -> Quantity:
    if a.dim != b.dim:
        raise DimensionMismatchError("dimension mismatch inside a sum")
    return Quantity(a.magnitude + b.magnitude, a.dim)


def q_sub(a: Quantity, b: Quantity) -> Quantity:
    return q_add(a, -b)


def log_ratio(a: Quantity, b: Quantity) -> float:
    """符号付きの log10(a/b)。decade_gap と同じ前提条件を持つ"""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.magnitude == 0.0 or b.magnitude == 0.0:
        raise QuantityError("zero magnitude")
    if (a.magnitude > 0) != (b.magnitude > 0):
        raise QuantityError("opposite-sign magnitudes")
    return math.log10(abs(a.magnitude)) - math.log10(abs(b.magnitude))


def decade_gap(a: Quantity, b: Quantity) -> float:
    """同じ次元の2量の桁数差 |log10(|a|/|b|)|"""
    return abs(log_ratio(a, b))
