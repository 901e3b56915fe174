"""
桁数レベルの関係式と、その検証結果を表すエンティティ
"""
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from src.domain.entities.expression import Expression
from src.domain.entities.quantity import Quantity
from src.domain.errors import RelationError


class DimensionPolicy(str, Enum):
    """次元チェックの方針"""
    STRICT = "strict"
    WAIVED = "waived"


@dataclass(frozen=True)
class Relation:
    """
    左辺 ~ 右辺 を許容桁数で比較する宣言的なチェック

    strict の場合は両辺の次元が完全に一致しなければならない。
    waived の場合は waiver_note に採用した読み方を記録する。
    """
    id: str
    description: str
    lhs: Expression
    rhs: Expression
    tolerance_decades: float
    dimension_policy: DimensionPolicy = DimensionPolicy.STRICT
    waiver_note: str = ""
    ref: str = ""
    # (ラベル, 表から計算する式, 主張値の式)。判定には使わず notes に桁数差を残す
    input_check: Optional[Tuple[str, Expression, Expression]] = None

    def __post_init__(self):
        if not self.id:
            raise RelationError("relation id must not be empty")
        tol = float(self.tolerance_decades)
        if not math.isfinite(tol) or tol < 0:
            raise RelationError(f"{self.id}: tolerance must be a finite value >= 0")
        object.__setattr__(self, "tolerance_decades", tol)
        object.__setattr__(self, "dimension_policy", DimensionPolicy(self.dimension_policy))
        if self.dimension_policy is DimensionPolicy.WAIVED and not self.waiver_note.strip():
            raise RelationError(f"{self.id}: waived relation requires a waiver note")

    @property
    def waived(self) -> bool:
        return self.dimension_policy is DimensionPolicy.WAIVED

    def with_tolerance(self, tolerance_decades: float) -> "Relation":
        return replace(self, tolerance_decades=tolerance_decades)

    def swapped(self) -> "Relation":
        """左右を入れ替えた関係式"""
        return replace(self, lhs=self.rhs, rhs=self.lhs)


@dataclass(frozen=True)
class CheckResult:
    """1つの関係式の検証結果"""
    relation_id: str
    lhs_value: Optional[Quantity]
    rhs_value: Optional[Quantity]
    gap_decades: Optional[float]
    log_ratio: Optional[float]
    tolerance_decades: float
    dimension_ok: bool
    dimension_policy: DimensionPolicy
    passed: bool
    notes: str = ""

    def __post_init__(self):
        expected = (
            (self.dimension_ok or self.dimension_policy is DimensionPolicy.WAIVED)
            and self.gap_decades is not None
            and self.gap_decades <= self.tolerance_decades
        )
        if self.passed != expected:
            raise RelationError(f"{self.relation_id}: inconsistent pass flag")


@dataclass(frozen=True)
class ReportSummary:
    total: int
    passed: int
    failed: int
    waived: int


@dataclass(frozen=True)
class Report:
    """関係式チェック全体の結果"""
    timestamp: str
    fingerprint: str
    results: Tuple[CheckResult, ...]

    @property
    def summary(self) -> ReportSummary:
        passed = sum(1 for r in self.results if r.passed)
        waived = sum(1 for r in self.results if r.dimension_policy is DimensionPolicy.WAIVED)
        return ReportSummary(len(self.results), passed, len(self.results) - passed, waived)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, relation_id: str) -> CheckResult:
        for r in self.results:
            if r.relation_id == relation_id:
                return r
        raise KeyError(relation_id)
