"""
関係式の評価・検証とレポート生成を行うサービス
"""
import math
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from functools import reduce
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.config.logger import get_module_logger
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.expression import Expression, Literal, Power, Product, Ref, Sum, Unary
from src.domain.entities.quantity import Quantity, log_ratio, q_add, q_mul, q_pow
from src.domain.entities.relation import CheckResult, DimensionPolicy, Relation, Report
from src.domain.errors import ComptonLedgerError, ExpressionError, RelationError
from src.domain.repositories.relation_registry import builtin_registry

logger = get_module_logger("relations")

HALF = Fraction(1, 2)


def eval_expression(e: Expression, table: ConstantsTable) -> Quantity:
    """
    式木をボトムアップに評価する

    Args:
        e: 式木
        table: 参照を解決する定数テーブル

    Returns:
        Quantity: 評価結果
    """
    if isinstance(e, Ref):
        value = table.get(e.name)
        if value is None:
            raise ExpressionError(f"unresolved reference {e.name}")
        return value
    if isinstance(e, Literal):
        return Quantity(e.value)
    if isinstance(e, Product):
        return reduce(q_mul, (eval_expression(f, table) for f in e.factors))
    if isinstance(e, Power):
        return q_pow(eval_expression(e.base, table), e.exponent)
    if isinstance(e, Sum):
        return reduce(q_add, (eval_expression(t, table) for t in e.terms))
    if isinstance(e, Unary):
        inner = eval_expression(e.operand, table)
        if e.op == "sqrt":
            return q_pow(inner, HALF)
        if not inner.dim.is_dimensionless:
            raise ExpressionError(f"log10 of a dimensional quantity ({inner.dim})")
        if inner.magnitude <= 0:
            raise ExpressionError("log10 of a non-positive value")
        return Quantity(math.log10(inner.magnitude))
    raise ExpressionError(f"unknown expression node {type(e).__name__}")


def _magnitude_log_ratio(a: Quantity, b: Quantity) -> float:
    # 次元を無視した大きさの比（waived 用）
    return log_ratio(Quantity(a.magnitude), Quantity(b.magnitude))


def _input_check_note(check: Tuple[str, Expression, Expression], table: ConstantsTable) -> str:
    label, computed, asserted = check
    try:
        from_table = eval_expression(computed, table)
        stated = eval_expression(asserted, table)
        gap = abs(_magnitude_log_ratio(from_table, stated))
    except ComptonLedgerError as e:
        return f"input check {label}: {e}"
    if gap > 1.0:
        logger.warning(f"{label} の主張値は表から計算した値と {gap:.1f} 桁離れています")
    return (f"input check {label}: table gives {from_table.magnitude:.3g}, "
            f"asserted {stated.magnitude:.3g}, {gap:.1f} decades apart")


def check_relation(r: Relation, table: ConstantsTable) -> CheckResult:
    """
    関係式の両辺を評価して桁数差を判定する

    評価エラーは例外にせず、passed=False の結果として notes に記録する。

    Args:
        r: 関係式
        table: 定数テーブル

    Returns:
        CheckResult: 判定結果
    """
    def failed(notes: str, lhs=None, rhs=None, dimension_ok=False) -> CheckResult:
        return CheckResult(r.id, lhs, rhs, None, None, r.tolerance_decades,
                           dimension_ok, r.dimension_policy, False, notes)

    try:
        lhs = eval_expression(r.lhs, table)
        rhs = eval_expression(r.rhs, table)
    except ComptonLedgerError as e:
        logger.debug(f"{r.id} の評価に失敗しました: {e}")
        return failed(str(e))

    dimension_ok = lhs.dim == rhs.dim
    notes = []
    if not dimension_ok:
        notes.append(f"dimension mismatch: {lhs.dim} vs {rhs.dim}")
    if r.dimension_policy is DimensionPolicy.WAIVED:
        notes.append(f"dimension waived: {r.waiver_note}")

    try:
        ratio = log_ratio(lhs, rhs) if dimension_ok else _magnitude_log_ratio(lhs, rhs)
    except ComptonLedgerError as e:
        return failed("; ".join(notes + [str(e)]), lhs, rhs, dimension_ok)

    if r.input_check is not None:
        notes.append(_input_check_note(r.input_check, table))

    gap = abs(ratio)
    passed = (dimension_ok or r.dimension_policy is DimensionPolicy.WAIVED) \
        and gap <= r.tolerance_decades
    return CheckResult(r.id, lhs, rhs, gap, ratio, r.tolerance_decades,
                       dimension_ok, r.dimension_policy, passed, "; ".join(notes))


def _utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def select_relations(relations: Sequence[Relation], ids: Optional[Iterable[str]] = None,
                     overrides: Optional[Dict[str, float]] = None) -> List[Relation]:
    """
    ID で絞り込み、許容桁数を上書きした関係式の列を返す

    Args:
        relations: レジストリ順の関係式
        ids: 対象 ID（None なら全件）
        overrides: ID → 許容桁数

    Returns:
        List[Relation]: レジストリ順を保った関係式
    """
    known = {r.id for r in relations}
    overrides = dict(overrides or {})
    for rid in list(ids or []) + list(overrides):
        if rid not in known:
            raise RelationError(f"unknown relation id {rid}")
    wanted = set(ids) if ids else None
    return [
        r.with_tolerance(overrides[r.id]) if r.id in overrides else r
        for r in relations
        if wanted is None or r.id in wanted
    ]


def run_registry(table: ConstantsTable,
                 ids: Optional[Iterable[str]] = None,
                 overrides: Optional[Dict[str, float]] = None,
                 relations: Optional[Sequence[Relation]] = None,
                 workers: int = 1,
                 clock: Callable[[], str] = _utc_timestamp) -> Report:
    """
    レジストリの関係式をすべて検証してレポートにまとめる

    Args:
        table: 定数テーブル
        ids: 対象 ID のリスト（省略時は全件）
        overrides: 許容桁数の上書き
        relations: 検証する関係式（省略時は組み込みレジストリ）
        workers: 1 より大きければスレッドプールで評価する
        clock: タイムスタンプ生成関数

    Returns:
        Report: レジストリ順の結果
    """
    selected = select_relations(builtin_registry() if relations is None else relations,
                                ids, overrides)
    if workers > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: check_relation(r, table), selected))
    else:
        results = [check_relation(r, table) for r in selected]

    report = Report(clock(), table.fingerprint, tuple(results))
    s = report.summary
    logger.info(f"関係式チェック完了: {s.passed}/{s.total} 件合格")
    return report
