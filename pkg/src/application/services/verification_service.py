"""
定数の読み込みから各検証までをまとめるサービス
"""
from typing import Dict, Iterable, List, Optional, Sequence

from src.application.services import algebra_service, cosmology_service, particle_service
from src.application.services.relation_service import run_registry
from src.config.logger import get_module_logger
from src.domain.entities.clifford import SuiteResult
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.cosmology_state import SimulationConfig, SimulationRun
from src.domain.entities.particles import ParticleSummary, PotentialParams
from src.domain.entities.relation import Relation, Report
from src.domain.interfaces.constants_interface import ConstantsRepositoryInterface
from src.domain.repositories.relation_registry import builtin_registry, extend_registry

logger = get_module_logger("verification")

# report サブコマンドの短い決定論的シミュレーション（tau 単位）
REPORT_T_END_TAU = 1e4
REPORT_DT_TAU = 1.0
REPORT_STRIDE = 100


class VerificationService:
    """検証ワークフローのサービスクラス"""

    def __init__(
        self,
        constants_repository: ConstantsRepositoryInterface,
        extra_relations: Optional[Sequence[Relation]] = None,
    ):
        """
        検証サービスを初期化する

        Args:
            constants_repository: 定数テーブルの読み込み元
            extra_relations: 組み込みレジストリに追加する関係式（オプショナル）
        """
        self.constants_repository = constants_repository
        self.extra_relations = list(extra_relations or [])
        self._table: Optional[ConstantsTable] = None

    @property
    def table(self) -> ConstantsTable:
        """定数テーブル（初回アクセス時に読み込む）"""
        if self._table is None:
            self._table = self.constants_repository.load()
        return self._table

    @property
    def relations(self) -> List[Relation]:
        return extend_registry(builtin_registry(), self.extra_relations)

    def check(self, ids: Optional[Iterable[str]] = None,
              overrides: Optional[Dict[str, float]] = None, workers: int = 1) -> Report:
        return run_registry(self.table, ids=ids, overrides=overrides,
                            relations=self.relations, workers=workers)

    def algebra(self, suites: Iterable[str] = algebra_service.SUITES,
                trials: int = 1000, seed: int = 7) -> List[SuiteResult]:
        return algebra_service.run_suites(self.table, suites, trials, seed)

    def simulate(self, cfg: SimulationConfig) -> SimulationRun:
        return cosmology_service.simulate(cfg, self.table)

    def particles(self, alpha: float = 1.0, beta_scale: float = 1.0, mass_key: str = "m_pi",
                  radii: Optional[Iterable[float]] = None) -> ParticleSummary:
        params: PotentialParams = particle_service.potential_params(
            self.table, alpha, beta_scale, mass_key)
        return particle_service.particle_summary(self.table, params, radii)

    def report_simulation_config(self) -> SimulationConfig:
        tau = self.table["tau_pi"].magnitude
        return SimulationConfig(t_end=REPORT_T_END_TAU * tau, dt=REPORT_DT_TAU * tau,
                                output_stride=REPORT_STRIDE)

    def full_report(self, trials: int = 1000, seed: int = 7, workers: int = 1,
                    ids: Optional[Iterable[str]] = None,
                    overrides: Optional[Dict[str, float]] = None):
        """
        check・algebra・短い simulate をまとめて実行する

        Returns:
            Tuple[Report, List[SuiteResult], SimulationRun]: 各結果
        """
        report = self.check(ids, overrides, workers)
        suites = self.algebra(trials=trials, seed=seed)
        run = self.simulate(self.report_simulation_config())
        logger.info("全体レポートを作成しました")
        return report, suites, run
