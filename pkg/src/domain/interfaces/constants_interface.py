"""
定数テーブルの入出力に関するインターフェース
"""
from abc import ABC, abstractmethod

from src.domain.entities.constants_table import ConstantsTable


class ConstantsRepositoryInterface(ABC):
    """定数テーブルの保管場所のインターフェース"""

    @abstractmethod
    def load(self) -> ConstantsTable:
        """定数テーブルを読み込む"""
        pass

    @abstractmethod
    def save(self, table: ConstantsTable) -> None:
        """定数テーブルを書き出す"""
        pass
