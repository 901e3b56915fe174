"""
定数ファイルの読み書きを行うモジュール

1行1エントリの書式:
    name = <float> <unit-expr> ; provenance=<measured|paper|derived> ; note="..."
"""
import hashlib
import re
from typing import Dict, List, NamedTuple, Union

from src.config.logger import get_module_logger
from src.domain.entities.constants_table import (
    REQUIRED_KEYS, ConstantEntry, ConstantsTable, Provenance,
)
from src.domain.entities.quantity import Dimension, Quantity, decade_gap
from src.domain.errors import ComptonLedgerError, ConstantsFileError
from src.domain.interfaces.constants_interface import ConstantsRepositoryInterface
from src.domain.repositories.derivation_rules import DERIVATION_RULES

logger = get_module_logger("constants_file")

# 派生値と記載値の許容差（桁）
CONSISTENCY_DECADES = 0.5

_LINE = re.compile(
    r'^(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*'
    r'(?P<value>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s+'
    r'(?P<unit>[^;]+?)\s*;\s*'
    r'provenance=(?P<provenance>measured|paper|derived)'
    r'(?:\s*;\s*note="(?P<note>[^"]*)")?\s*$'
)


class _StatedEntry(NamedTuple):
    quantity: Quantity
    provenance: Provenance
    note: str
    line_no: int


def _decode(text: Union[bytes, str]) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ConstantsFileError(f"constants file is not UTF-8: {e}") from e


def _fingerprint(text: Union[bytes, str]) -> str:
    data = text if isinstance(text, bytes) else text.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def _parse_lines(content: str) -> Dict[str, _StatedEntry]:
    stated: Dict[str, _StatedEntry] = {}
    for line_no, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _LINE.match(line)
        if not match:
            raise ConstantsFileError(f"line {line_no}: malformed entry")
        name = match.group("name")
        if name in stated:
            raise ConstantsFileError(f"line {line_no}: duplicate key {name}")
        try:
            quantity = Quantity(float(match.group("value")), Dimension.parse(match.group("unit")))
        except ComptonLedgerError as e:
            raise ConstantsFileError(f"line {line_no}: {e}") from e
        provenance = Provenance(match.group("provenance"))
        if provenance is Provenance.DERIVED and name not in DERIVATION_RULES:
            raise ConstantsFileError(f"line {line_no}: no derivation rule for {name}")
        stated[name] = _StatedEntry(quantity, provenance, match.group("note") or "", line_no)
    return stated


def parse_constants(text: Union[bytes, str]) -> ConstantsTable:
    """
    定数ファイルを解析してテーブルを作る

    派生キーは依存キーから再計算され、記載値と0.5桁以上ずれていればエラーになる。
    記載のない派生キーは読み込み時に計算して追加する。

    Args:
        text: UTF-8 のバイト列または文字列

    Returns:
        ConstantsTable: 必須キーをすべて含むテーブル
    """
    stated = _parse_lines(_decode(text))

    for key in REQUIRED_KEYS:
        if key not in DERIVATION_RULES and key not in stated:
            raise ConstantsFileError(f"missing required key {key}")

    values = {name: s.quantity for name, s in stated.items()}
    derived: Dict[str, ConstantEntry] = {}
    for rule in DERIVATION_RULES.values():
        entry = stated.get(rule.name)
        if entry is not None and entry.provenance is not Provenance.DERIVED:
            continue
        missing = [dep for dep in rule.depends_on if dep not in values]
        if missing:
            if entry is not None:
                raise ConstantsFileError(
                    f"line {entry.line_no}: cannot derive {rule.name}, missing {', '.join(missing)}")
            continue
        try:
            recomputed = rule.compute(values)
        except ComptonLedgerError as e:
            raise ConstantsFileError(f"cannot derive {rule.name}: {e}") from e
        if entry is not None:
            if entry.quantity.dim != recomputed.dim or \
                    decade_gap(entry.quantity, recomputed) > CONSISTENCY_DECADES:
                raise ConstantsFileError(
                    f"inconsistent constants file: {rule.name} stated {entry.quantity} "
                    f"but recomputed {recomputed}")
            note = entry.note
        else:
            note = f"computed at load: {rule.formula}"
            logger.debug(f"{rule.name} を読み込み時に計算しました: {recomputed}")
        values[rule.name] = recomputed
        derived[rule.name] = ConstantEntry(
            rule.name, recomputed, Provenance.DERIVED, note, rule.depends_on)

    entries: List[ConstantEntry] = []
    for name, s in stated.items():
        if name in derived:
            entries.append(derived.pop(name))
        else:
            entries.append(ConstantEntry(name, s.quantity, s.provenance, s.note))
    entries.extend(derived.values())

    table = ConstantsTable(tuple(entries), fingerprint=_fingerprint(text))
    for key in REQUIRED_KEYS:
        if key not in table:
            raise ConstantsFileError(f"missing required key {key}")
    return table


def serialize_constants(table: ConstantsTable) -> str:
    """テーブルを定数ファイルの書式に書き出す"""
    lines = ["# compton-ledger constants (cgs-Gaussian)"]
    for entry in table:
        note = entry.note.replace('"', "'")
        lines.append(
            f"{entry.name} = {entry.quantity.magnitude!r} {entry.quantity.dim.unit_expr()} ; "
            f"provenance={entry.provenance.value} ; note=\"{note}\""
        )
    return "\n".join(lines) + "\n"


class ConstantsFileRepository(ConstantsRepositoryInterface):
    """ファイルシステム上の定数ファイルを扱うリポジトリ"""

    def __init__(self, path: str):
        """
        Args:
            path: 定数ファイルのパス
        """
        self.path = path

    def load(self) -> ConstantsTable:
        with open(self.path, "rb") as f:
            data = f.read()
        table = parse_constants(data)
        logger.info(f"定数ファイルを読み込みました: {self.path} ({len(table)} 件)")
        return table

    def save(self, table: ConstantsTable) -> None:
        with open(self.path, "w", encoding="utf-8", newline="\n") as f:
            f.write(serialize_constants(table))
        logger.info(f"定数ファイルを書き出しました: {self.path}")
