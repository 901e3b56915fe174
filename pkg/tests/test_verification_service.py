"""
VerificationService のテスト（定数リポジトリを差し替えて使う）
"""
import pytest

from src.application.services.verification_service import VerificationService
from src.domain.entities.expression_parser import parse_expression
from src.domain.entities.relation import Relation
from src.domain.errors import RelationError
from src.domain.interfaces.constants_interface import ConstantsRepositoryInterface


class InMemoryConstantsRepository(ConstantsRepositoryInterface):
    def __init__(self, table):
        self.table = table
        self.loads = 0

    def load(self):
        self.loads += 1
        return self.table

    def save(self, table):
        self.table = table


def test_table_is_loaded_once(table):
    repo = InMemoryConstantsRepository(table)
    service = VerificationService(repo)
    service.check(["E1"])
    service.check(["E2"])
    assert repo.loads == 1


def test_extra_relations_are_appended(table):
    extra = Relation("U1", "", parse_expression("N"), parse_expression("1e80"), 0.0)
    service = VerificationService(InMemoryConstantsRepository(table), [extra])
    report = service.check()
    assert report.results[-1].relation_id == "U1"
    assert report.all_passed


def test_colliding_extra_relation(table):
    extra = Relation("QM", "", parse_expression("N"), parse_expression("N"), 0.0)
    service = VerificationService(InMemoryConstantsRepository(table), [extra])
    with pytest.raises(RelationError):
        service.check()


def test_full_report(table):
    service = VerificationService(InMemoryConstantsRepository(table))
    report, suites, run = service.full_report(trials=10, seed=1)
    assert report.all_passed
    assert [s.name for s in suites] == ["clifford", "onshell", "snyder"]
    assert all(s.passed for s in suites)
    assert len(run.series) == 101
    assert run.trend is not None


def test_particles_summary(table):
    summary = VerificationService(InMemoryConstantsRepository(table)).particles(alpha=2.0, beta_scale=0.5)
    assert summary.crossover_radius == pytest.approx(2.0)
