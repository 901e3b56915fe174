"""
ユーザー定義の関係式ファイルを読み込むモジュール

1行1関係式の書式:
    id: <lhs-expr> ~ <rhs-expr> ; tol=<real> ; dim=<strict|waived> ; ref="..." ; note="..." ; desc="..."
"""
import re
from typing import Dict, List, Union

from src.config.logger import get_module_logger
from src.domain.entities.expression_parser import parse_expression
from src.domain.entities.relation import DimensionPolicy, Relation
from src.domain.errors import ComptonLedgerError, RelationError

logger = get_module_logger("relation_file")

_HEAD = re.compile(r"^(?P<id>[A-Za-z0-9_.-]+)\s*:\s*(?P<body>[^;]+?)\s*(?P<tail>;.*)?$")
_OPTION = re.compile(r'\s*;\s*(?P<key>[a-z]+)=(?:"(?P<quoted>[^"]*)"|(?P<bare>[^;"\s]+))\s*')
_KEYS = ("tol", "dim", "ref", "note", "desc")


def _parse_options(tail: str, line_no: int) -> Dict[str, str]:
    options: Dict[str, str] = {}
    pos = 0
    while pos < len(tail):
        match = _OPTION.match(tail, pos)
        if not match:
            raise RelationError(f"line {line_no}: malformed option {tail[pos:].strip()!r}")
        key = match.group("key")
        if key not in _KEYS:
            raise RelationError(f"line {line_no}: unknown option {key}")
        value = match.group("quoted")
        options[key] = value if value is not None else match.group("bare")
        pos = match.end()
    return options


def parse_relations(text: Union[bytes, str]) -> List[Relation]:
    """
    関係式ファイルの内容を解析する

    Args:
        text: UTF-8 のバイト列または文字列

    Returns:
        List[Relation]: ファイル順の関係式
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise RelationError(f"relation file is not UTF-8: {e}") from e
    relations: List[Relation] = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _HEAD.match(line)
        if not match:
            raise RelationError(f"line {line_no}: malformed relation")
        rid = match.group("id")
        if rid in seen:
            raise RelationError(f"line {line_no}: duplicate relation id {rid}")
        sides = match.group("body").split("~")
        if len(sides) != 2:
            raise RelationError(f"line {line_no}: expected exactly one '~'")
        options = _parse_options(match.group("tail") or "", line_no)
        if "tol" not in options:
            raise RelationError(f"line {line_no}: missing tol")
        try:
            relations.append(Relation(
                id=rid,
                description=options.get("desc", ""),
                lhs=parse_expression(sides[0]),
                rhs=parse_expression(sides[1]),
                tolerance_decades=float(options["tol"]),
                dimension_policy=DimensionPolicy(options.get("dim", "strict")),
                waiver_note=options.get("note", ""),
                ref=options.get("ref", ""),
            ))
        except (ComptonLedgerError, ValueError) as e:
            raise RelationError(f"line {line_no}: {e}") from e
        seen.add(rid)
    return relations


def load_relations(path: str) -> List[Relation]:
    with open(path, "rb") as f:
        relations = parse_relations(f.read())
    logger.info(f"関係式ファイルを読み込みました: {path} ({len(relations)} 件)")
    return relations

