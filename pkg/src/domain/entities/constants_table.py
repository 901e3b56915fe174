"""
物理定数・観測値のテーブルを表すエンティティ
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple

from src.domain.entities.quantity import Quantity
from src.domain.errors import ConstantsFileError

# 読み込み後に必ず存在するキー
REQUIRED_KEYS: Tuple[str, ...] = (
    "hbar", "c", "G", "e", "m_pi", "m_e", "m_p", "m_planck", "l_pi", "tau_pi",
    "R_obs", "T_obs", "H_obs", "rho_obs", "N", "N_nu", "m_nu",
    "rho_planck", "l_planck", "tau_planck",
)


class Provenance(str, Enum):
    """定数の出典区分"""
    MEASURED = "measured"
    PAPER = "paper"
    DERIVED = "derived"


@dataclass(frozen=True)
class ConstantEntry:
    """テーブルの1行"""
    name: str
    quantity: Quantity
    provenance: Provenance
    note: str = ""
    derived_from: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.provenance is Provenance.DERIVED and not self.derived_from:
            raise ConstantsFileError(f"derived entry {self.name} lists no dependencies")


@dataclass(frozen=True)
class ConstantsTable:
    """名前順序を保った定数テーブル（不変）"""
    entries: Tuple[ConstantEntry, ...]
    fingerprint: str = field(default="", compare=False)

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.name in seen:
                raise ConstantsFileError(f"duplicate key {entry.name}")
            seen.add(entry.name)
        object.__setattr__(self, "_index", {e.name: e for e in self.entries})

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Quantity:
        return self.entry(name).quantity

    def __iter__(self) -> Iterator[ConstantEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, name: str) -> ConstantEntry:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(name) from None

    def get(self, name: str) -> Optional[Quantity]:
        entry = self._index.get(name)
        return entry.quantity if entry else None

    def names(self) -> Tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def as_dict(self) -> Dict[str, Quantity]:
        return {e.name: e.quantity for e in self.entries}

    def with_value(self, name: str, quantity: Quantity) -> "ConstantsTable":
        """
        1つの値だけを差し替えたテーブルを返す（派生値は再計算しない）

        Args:
            name: 差し替えるキー
            quantity: 新しい値

        Returns:
            ConstantsTable: 差し替え後のコピー
        """
        if name in self._index:
            entries = tuple(
                replace(e, quantity=quantity) if e.name == name else e
                for e in self.entries
            )
        else:
            entries = self.entries + (ConstantEntry(name, quantity, Provenance.PAPER),)
        return ConstantsTable(entries, fingerprint=self.fingerprint)

    def without(self, name: str) -> "ConstantsTable":
        return ConstantsTable(
            tuple(e for e in self.entries if e.name != name),
            fingerprint=self.fingerprint,
        )
