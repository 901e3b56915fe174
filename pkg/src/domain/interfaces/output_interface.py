"""
レポート出力に関するインターフェース
"""
from abc import ABC, abstractmethod
from typing import List

from src.domain.entities.clifford import SuiteResult
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.cosmology_state import SimulationRun
from src.domain.entities.particles import ParticleSummary
from src.domain.entities.relation import Report


class OutputFormatterInterface(ABC):
    """各サブコマンドの結果を1つの文書に整形するインターフェース"""

    name: str = ""

    @abstractmethod
    def format_report(self, report: Report) -> str:
        """関係式チェックの結果を整形する"""
        pass

    @abstractmethod
    def format_simulation(self, run: SimulationRun) -> str:
        """時系列・lambda・トレンド判定を整形する"""
        pass

    @abstractmethod
    def format_algebra(self, suites: List[SuiteResult]) -> str:
        """行列代数スイートの結果を整形する"""
        pass

    @abstractmethod
    def format_constants(self, table: ConstantsTable) -> str:
        """定数テーブルを整形する"""
        pass

    @abstractmethod
    def format_particles(self, summary: ParticleSummary) -> str:
        """素粒子セクターの値を整形する"""
        pass

    @abstractmethod
    def format_full(self, report: Report, suites: List[SuiteResult], run: SimulationRun) -> str:
        """check・algebra・simulate をまとめた文書を整形する"""
        pass
