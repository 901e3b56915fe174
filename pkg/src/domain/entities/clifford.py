"""
ガンマ行列系・四元運動量・スピノルのエンティティ
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from src.domain.errors import AlgebraError

# 正方複素行列（この用途では 2×2 または 4×4）
ComplexMatrix = np.ndarray


def as_complex_matrix(m: Any) -> ComplexMatrix:
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise AlgebraError(f"matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise AlgebraError("matrix entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CliffordSet:
    """同じ大きさの行列の組と、期待する計量符号"""
    label: str
    matrices: Tuple[ComplexMatrix, ...]
    metric: Tuple[int, ...]

    def __post_init__(self):
        matrices = tuple(as_complex_matrix(m) for m in self.matrices)
        if not matrices:
            raise AlgebraError(f"{self.label}: empty matrix set")
        size = matrices[0].shape[0]
        if any(m.shape[0] != size for m in matrices):
            raise AlgebraError(f"{self.label}: matrix size mismatch within set")
        metric = tuple(int(s) for s in self.metric)
        if len(metric) != len(matrices):
            raise AlgebraError(f"{self.label}: metric length differs from matrix count")
        if any(s not in (1, -1) for s in metric):
            raise AlgebraError(f"{self.label}: metric entries must be +1 or -1")
        object.__setattr__(self, "matrices", matrices)
        object.__setattr__(self, "metric", metric)

    @property
    def size(self) -> int:
        return self.matrices[0].shape[0]

    def __len__(self) -> int:
        return len(self.matrices)


def signature_string(signature: Tuple[int, ...]) -> str:
    """(+1, -1, 0) を "(+,-,?)" の形にする"""
    symbols = {1: "+", -1: "-"}
    return "(" + ",".join(symbols.get(s, "?") for s in signature) + ")"


@dataclass(frozen=True)
class FourMomentum:
    """反変成分の四元運動量 (p0 = E/c)。単位は g cm/s"""
    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        for name in ("p0", "p1", "p2", "p3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise AlgebraError(f"four-momentum component {name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3])

    @property
    def spatial_norm(self) -> float:
        return float(np.linalg.norm(self.spatial))

    @property
    def minkowski_square(self) -> float:
        """p^mu p_mu = p0^2 - |p|^2"""
        return self.p0 * self.p0 - float(self.spatial @ self.spatial)

    @classmethod
    def on_shell(cls, spatial, mass: float, c: float) -> "FourMomentum":
        """正エネルギーの質量殻上の運動量を作る"""
        p = np.asarray(spatial, dtype=float)
        p0 = math.sqrt(float(p @ p) + (mass * c) ** 2)
        return cls(p0, float(p[0]), float(p[1]), float(p[2]))

    def rotated(self, rotation: np.ndarray) -> "FourMomentum":
        p = np.asarray(rotation, dtype=float) @ self.spatial
        return FourMomentum(self.p0, float(p[0]), float(p[1]), float(p[2]))


@dataclass(frozen=True)
class SpinorVector:
    """4成分スピノル。上2成分が theta、下2成分が chi"""
    components: Tuple[complex, complex, complex, complex]

    def __post_init__(self):
        comps = tuple(complex(z) for z in self.components)
        if len(comps) != 4:
            raise AlgebraError("spinor must have 4 components")
        if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in comps):
            raise AlgebraError("spinor components must be finite")
        object.__setattr__(self, "components", comps)

    @property
    def upper(self) -> Tuple[complex, complex]:
        return self.components[0], self.components[1]

    @property
    def lower(self) -> Tuple[complex, complex]:
        return self.components[2], self.components[3]

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=np.complex128)


@dataclass(frozen=True)
class PairDeviation:
    """{Γa, Γb} - 2 η^ab I の最大成分"""
    a: int
    b: int
    deviation: float


@dataclass(frozen=True)
class CliffordVerification:
    label: str
    pairs: Tuple[PairDeviation, ...]
    max_deviation: float
    signature: Tuple[int, ...]
    metric: Tuple[int, ...]

    @property
    def metric_matches(self) -> bool:
        return self.signature == self.metric

    @property
    def exact(self) -> bool:
        return self.max_deviation == 0.0


@dataclass(frozen=True)
class SuiteResult:
    """algebra サブコマンドの1スイート分の結果"""
    name: str
    passed: bool
    rows: Tuple[Dict[str, Any], ...] = field(default_factory=tuple)

    def as_rows(self) -> List[Dict[str, Any]]:
        return [dict(row) for row in self.rows]
