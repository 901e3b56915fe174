"""
関係式の評価と検証のテスト
"""
import pytest

from src.application.services.relation_service import (
    check_relation, eval_expression, run_registry, select_relations,
)
from src.domain.entities.expression_parser import parse_expression
from src.domain.entities.quantity import LENGTH, Quantity
from src.domain.entities.relation import CheckResult, DimensionPolicy, Relation
from src.domain.errors import ExpressionError, RelationError
from src.domain.repositories.relation_registry import builtin_registry
from src.infrastructure.relations.relation_file import load_relations, parse_relations


def _relation(lhs, rhs, tol=1.0, **kwargs):
    return Relation("X1", "", parse_expression(lhs), parse_expression(rhs), tol, **kwargs)


def test_eval_resolves_references(table):
    q = eval_expression(parse_expression("l_pi * sqrt(N)"), table)
    assert q.dim == LENGTH
    assert q.magnitude == pytest.approx(1.4139e27, rel=1e-3)


def test_eval_errors(table):
    with pytest.raises(ExpressionError, match="unresolved reference nope"):
        eval_expression(parse_expression("nope"), table)
    with pytest.raises(ExpressionError, match="log10 of a dimensional quantity"):
        eval_expression(parse_expression("log10(c)"), table)
    with pytest.raises(ExpressionError, match="non-positive"):
        eval_expression(parse_expression("log10(0)"), table)
    assert eval_expression(parse_expression("log10(N)"), table).magnitude == pytest.approx(80.0)


def test_gap_is_symmetric_under_swap(table):
    r = _relation("R_obs", "l_pi * sqrt(N)", 1.5)
    a = check_relation(r, table)
    b = check_relation(r.swapped(), table)
    assert a.gap_decades == pytest.approx(b.gap_decades)
    assert a.log_ratio == pytest.approx(-b.log_ratio)
    assert a.passed and b.passed


def test_tolerance_boundary(table):
    r = _relation("R_obs", "l_pi * sqrt(N)")
    gap = check_relation(r, table).gap_decades
    assert check_relation(r.with_tolerance(gap), table).passed
    assert not check_relation(r.with_tolerance(gap - 1e-6), table).passed
    assert not check_relation(r.with_tolerance(0.0), table).passed


def test_identity_passes_with_zero_tolerance(table):
    result = check_relation(_relation("c", "c", 0.0), table)
    assert result.passed
    assert result.gap_decades == 0.0


def test_strict_dimension_mismatch_fails(table):
    result = check_relation(_relation("R_obs", "T_obs", 100.0), table)
    assert not result.passed
    assert not result.dimension_ok
    assert "dimension mismatch" in result.notes
    assert result.gap_decades is not None


def test_waived_dimension_mismatch_compares_magnitudes(table):
    r = _relation("R_obs", "T_obs", 11.0, dimension_policy=DimensionPolicy.WAIVED,
                  waiver_note="test reading")
    result = check_relation(r, table)
    assert result.passed
    assert not result.dimension_ok
    assert "dimension waived: test reading" in result.notes
    assert result.gap_decades == pytest.approx(28.0 - 17.6335, abs=1e-3)


def test_evaluation_error_becomes_failed_result(table):
    result = check_relation(_relation("missing_key", "c"), table)
    assert not result.passed
    assert result.gap_decades is None
    assert "unresolved reference missing_key" in result.notes


def test_relation_validation():
    with pytest.raises(RelationError):
        _relation("c", "c", -1.0)
    with pytest.raises(RelationError):
        _relation("c", "c", float("inf"))
    with pytest.raises(RelationError, match="waiver note"):
        _relation("c", "c", dimension_policy=DimensionPolicy.WAIVED)


def test_check_result_enforces_pass_flag():
    with pytest.raises(RelationError, match="inconsistent pass flag"):
        CheckResult("X", Quantity(1.0), Quantity(1.0), 2.0, 2.0, 1.0, True,
                    DimensionPolicy.STRICT, True)


def test_select_relations_filters_and_overrides():
    relations = builtin_registry()
    selected = select_relations(relations, ["E2", "E1"], {"E1": 0.1})
    assert [r.id for r in selected] == ["E1", "E2"]
    assert selected[0].tolerance_decades == 0.1
    with pytest.raises(RelationError, match="unknown relation id E999"):
        select_relations(relations, ["E999"])
    with pytest.raises(RelationError, match="unknown relation id Q"):
        select_relations(relations, None, {"Q": 1.0})


def test_run_registry_is_deterministic_across_workers(table):
    clock = lambda: "2026-01-01T00:00:00+00:00"  # noqa: E731
    serial = run_registry(table, clock=clock)
    threaded = run_registry(table, workers=4, clock=clock)
    assert serial == threaded
    assert serial.fingerprint == table.fingerprint
    assert [r.relation_id for r in serial.results] == [r.id for r in builtin_registry()]


def test_run_registry_with_override_fails_e1(table):
    report = run_registry(table, ids=["E1"], overrides={"E1": 0.1})
    assert report.summary.total == 1
    assert not report.all_passed


def test_relation_file_parsing():
    text = (
        "# user relations\n"
        "\n"
        'U1: R_obs ~ c * T_obs ; tol=1 ; ref="light travel" ; desc="R = cT"\n'
        'U2: g2 / m_w^2 ~ 1e-5 ; tol=2 ; dim=waived ; note="per gram squared"\n'
    )
    relations = parse_relations(text)
    assert [r.id for r in relations] == ["U1", "U2"]
    assert relations[0].ref == "light travel"
    assert relations[1].waived


@pytest.mark.parametrize("text, message", [
    ("U1 R_obs ~ c ; tol=1", "line 1: malformed relation"),
    ("U1: R_obs ; tol=1", "line 1: expected exactly one"),
    ("U1: R_obs ~ c", "line 1: missing tol"),
    ("U1: R_obs ~ c ; tol=1 ; color=red", "line 1: unknown option color"),
    ("U1: R_obs ~ c ; tol=1\nU1: c ~ c ; tol=1", "line 2: duplicate relation id U1"),
    ("U1: R_obs ~ c ; tol=-1", "line 1"),
    ("U1: R_obs ~ c ; tol=1 ; dim=waived", "line 1"),
])
def test_relation_file_errors(text, message):
    with pytest.raises(RelationError, match=message):
        parse_relations(text)


def test_relation_file_must_be_utf8():
    with pytest.raises(RelationError, match="not UTF-8"):
        parse_relations(b"\xff\xfeU1: c ~ c ; tol=1\n")


def test_relation_file_with_deep_nesting():
    text = "U1: " + "(" * 400 + "c" + ")" * 400 + " ~ c ; tol=1"
    with pytest.raises(RelationError, match="line 1: expression nesting exceeds"):
        parse_relations(text)


def test_load_relations_from_file(tmp_path):
    path = tmp_path / "extra.rel"
    path.write_text("U1: N ~ 1e80 ; tol=0\n", encoding="utf-8")
    assert load_relations(str(path))[0].tolerance_decades == 0.0
