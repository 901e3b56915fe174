"""
ガンマ行列の Clifford 閉包・Snyder 変形・質量殻上の特異性を検証するサービス
"""
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import svdvals

from src.config.logger import get_module_logger
from src.domain.entities.clifford import (
    CliffordSet, CliffordVerification, ComplexMatrix, FourMomentum, PairDeviation,
    SpinorVector, SuiteResult, as_complex_matrix, signature_string,
)
from src.domain.entities.constants_table import ConstantsTable
from src.domain.errors import AlgebraError

logger = get_module_logger("algebra")

SUITES = ("clifford", "onshell", "snyder")

# 行列式の相対残差と零空間判定のしきい値
DETERMINANT_RTOL = 1e-9
NULLSPACE_RTOL = 1e-8
# 大きさの下限（S^4 に対する比）
DETERMINANT_FLOOR = 1e-4
SNYDER_ATOL = 1e-12

_PAULI = (
    ((0, 1), (1, 0)),
    ((0, -1j), (1j, 0)),
    ((1, 0), (0, -1)),
)


def pauli(i: int) -> ComplexMatrix:
    """
    Pauli 行列 σ_i を返す

    Args:
        i: 1, 2, 3 のいずれか

    Returns:
        ComplexMatrix: 2×2 複素行列
    """
    if i not in (1, 2, 3):
        raise AlgebraError(f"pauli index out of range: {i}")
    return as_complex_matrix(_PAULI[i - 1])


def _blocks(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]])


def infer_signature(matrices: Sequence[ComplexMatrix]) -> Tuple[int, ...]:
    """各行列の 2 乗が +I なら +1、-I なら -1、それ以外は 0"""
    signature = []
    for m in matrices:
        identity = np.eye(m.shape[0], dtype=np.complex128)
        square = m @ m
        if np.array_equal(square, identity):
            signature.append(1)
        elif np.array_equal(square, -identity):
            signature.append(-1)
        else:
            signature.append(0)
    return tuple(signature)


def _with_inferred_metric(label: str, matrices: List[np.ndarray]) -> CliffordSet:
    matrices = [as_complex_matrix(m) for m in matrices]
    signature = infer_signature(matrices)
    if 0 in signature:
        raise AlgebraError(f"{label}: a matrix does not square to plus or minus identity")
    return CliffordSet(label, tuple(matrices), signature)


def build_eq9_set() -> CliffordSet:
    """
    座標を表す 4×4 行列の組 {t, x1, x2, x3}

    t = diag(1, 1, -1, -1)、x_i は σ_i を非対角ブロックに置いたもの。
    計量は verify_clifford が見つける符号、すなわち (+,+,+,+) になる。
    """
    zero = np.zeros((2, 2))
    eye = np.eye(2)
    t = _blocks(eye, zero, zero, -eye)
    xs = [_blocks(zero, pauli(i), pauli(i), zero) for i in (1, 2, 3)]
    return _with_inferred_metric("coordinate", [t] + xs)


def build_dirac_set() -> CliffordSet:
    """Dirac 表示の γ^0..γ^3。計量 (+,-,-,-)"""
    zero = np.zeros((2, 2))
    eye = np.eye(2)
    gamma0 = _blocks(eye, zero, zero, -eye)
    gammas = [_blocks(zero, pauli(i), -pauli(i), zero) for i in (1, 2, 3)]
    return CliffordSet("dirac", tuple([gamma0] + gammas), (1, -1, -1, -1))


def verify_clifford(s: CliffordSet) -> CliffordVerification:
    """
    {Γa, Γb} = 2 η^ab I を全ての組 (a <= b) について検証する

    Args:
        s: 検証する行列の組

    Returns:
        CliffordVerification: 組ごとの偏差・最大偏差・推定した符号
    """
    size = s.size
    if any(m.shape != (size, size) for m in s.matrices):
        raise AlgebraError(f"{s.label}: matrix size mismatch within set")
    identity = np.eye(size, dtype=np.complex128)
    pairs = []
    for a, b in combinations_with_replacement(range(len(s)), 2):
        ga, gb = s.matrices[a], s.matrices[b]
        target = 2 * s.metric[a] * identity if a == b else 0 * identity
        deviation = float(np.max(np.abs(ga @ gb + gb @ ga - target)))
        pairs.append(PairDeviation(a, b, deviation))
    max_deviation = max(p.deviation for p in pairs)
    signature = infer_signature(s.matrices)
    logger.debug(f"{s.label}: 最大偏差 {max_deviation}, 符号 {signature_string(signature)}")
    return CliffordVerification(s.label, tuple(pairs), max_deviation, signature, s.metric)


def snyder_deformation(p: float, a: float, hbar: float) -> float:
    """
    量子化時空での交換関係の補正係数 1 + (a p / hbar)^2

    入力の浮動小数点値を有理数として扱い、最後に一度だけ丸める。

    Args:
        p: 運動量の大きさ (g cm/s)
        a: 最小長さ (cm)
        hbar: 換算 Planck 定数 (erg s)

    Returns:
        float: 補正係数
    """
    if p < 0:
        raise AlgebraError("momentum magnitude must be >= 0")
    if a <= 0:
        raise AlgebraError("minimum length must be > 0")
    ratio = Fraction(a) * Fraction(p) / Fraction(hbar)
    return float(1 + ratio * ratio)


def dirac_operator(p: FourMomentum, m: float, c: float,
                   gammas: Optional[CliffordSet] = None) -> np.ndarray:
    """γ^μ p_μ c - m c^2 I（添字を下げた p_μ = (p0, -p)）"""
    gammas = gammas or build_dirac_set()
    g0, g1, g2, g3 = gammas.matrices
    slashed = g0 * p.p0 - g1 * p.p1 - g2 * p.p2 - g3 * p.p3
    return slashed * c - m * c * c * np.eye(4, dtype=np.complex128)


def onshell_determinant(p: FourMomentum, m: float, c: float) -> complex:
    return complex(np.linalg.det(dirac_operator(p, m, c)))


def expected_determinant(p: FourMomentum, m: float, c: float) -> float:
    """(p^μ p_μ c^2 - m^2 c^4)^2"""
    return (p.minkowski_square * c * c - (m * c * c) ** 2) ** 2


def determinant_residual(p: FourMomentum, m: float, c: float) -> float:
    """
    計算した行列式と解析式の相対残差

    質量殻上では期待値が 0 になるため、max(|期待値|, 1e-4 S^4) で割る。
    S = max(|p0|, |p|, m c) c
    """
    expected = expected_determinant(p, m, c)
    scale = max(abs(p.p0), p.spatial_norm, m * c) * c
    denominator = max(abs(expected), DETERMINANT_FLOOR * scale ** 4)
    return abs(onshell_determinant(p, m, c) - expected) / denominator


def nullspace_dimension(p: FourMomentum, m: float, c: float, tolerance: float) -> int:
    """
    特異値がしきい値未満の個数（階数落ち）

    Args:
        p: 四元運動量
        m: 質量 (g)
        c: 光速 (cm/s)
        tolerance: 特異値のしきい値 (erg)

    Returns:
        int: 零空間の次元
    """
    if tolerance <= 0:
        raise AlgebraError("tolerance must be > 0")
    return int(np.sum(svdvals(dirac_operator(p, m, c)) < tolerance))


def nullspace_basis(p: FourMomentum, m: float, c: float, tolerance: float) -> List[SpinorVector]:
    """零空間を張るスピノル（上2成分 theta、下2成分 chi）"""
    if tolerance <= 0:
        raise AlgebraError("tolerance must be > 0")
    _, s, vh = np.linalg.svd(dirac_operator(p, m, c))
    return [SpinorVector(tuple(vh[k].conj())) for k in range(len(s)) if s[k] < tolerance]


def clifford_suite() -> SuiteResult:
    rows = []
    passed = True
    for gamma_set, expected in ((build_dirac_set(), (1, -1, -1, -1)),
                                (build_eq9_set(), (1, 1, 1, 1))):
        record = verify_clifford(gamma_set)
        ok = record.exact and record.signature == expected
        passed = passed and ok
        for pair in record.pairs:
            rows.append({
                "set": record.label,
                "pair": f"{pair.a},{pair.b}",
                "deviation": pair.deviation,
                "signature": signature_string(record.signature),
            })
    return SuiteResult("clifford", passed, tuple(rows))


def _random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def onshell_suite(table: ConstantsTable, trials: int = 1000, seed: int = 7) -> SuiteResult:
    """
    乱数の運動量で行列式の公式と零空間の次元を確かめる

    運動量の大きさは m_pi c の前後 5 桁に対数一様に分布させる。
    """
    if trials < 1:
        raise AlgebraError("trials must be >= 1")
    m = table["m_pi"].magnitude
    c = table["c"].magnitude
    tolerance = NULLSPACE_RTOL * m * c * c
    rng = np.random.default_rng(seed)

    max_on, max_off = 0.0, 0.0
    on_dims, off_dims = set(), set()
    for _ in range(trials):
        magnitude = m * c * 10.0 ** rng.uniform(-5.0, 5.0)
        on = FourMomentum.on_shell(magnitude * _random_direction(rng), m, c)
        off = FourMomentum(on.p0 * rng.uniform(1.1, 2.0), on.p1, on.p2, on.p3)
        max_on = max(max_on, determinant_residual(on, m, c))
        max_off = max(max_off, determinant_residual(off, m, c))
        on_dims.add(nullspace_dimension(on, m, c, tolerance))
        off_dims.add(nullspace_dimension(off, m, c, tolerance))

    rows = (
        {"check": "determinant_onshell", "trials": trials, "max_residual": max_on},
        {"check": "determinant_offshell", "trials": trials, "max_residual": max_off},
        {"check": "nullspace_onshell", "trials": trials, "dimensions": sorted(on_dims)},
        {"check": "nullspace_offshell", "trials": trials, "dimensions": sorted(off_dims)},
    )
    passed = (max_on <= DETERMINANT_RTOL and max_off <= DETERMINANT_RTOL
              and on_dims == {2} and off_dims == {0})
    return SuiteResult("onshell", passed, rows)


def snyder_suite(table: ConstantsTable) -> SuiteResult:
    """Compton パラメータでの係数 2 と a → 0 の極限 1 を確かめる"""
    hbar = table["hbar"].magnitude
    p = table["m_pi"].magnitude * table["c"].magnitude
    a = table["l_pi"].magnitude
    compton = snyder_deformation(p, a, hbar)
    limit = snyder_deformation(p, a * 1e-12, hbar)
    rows = (
        {"check": "compton", "p": p, "a": a, "factor": compton, "expected": 2.0},
        {"check": "a_to_zero", "p": p, "a": a * 1e-12, "factor": limit, "expected": 1.0},
    )
    passed = abs(compton - 2.0) <= SNYDER_ATOL and abs(limit - 1.0) <= SNYDER_ATOL
    return SuiteResult("snyder", passed, rows)


def run_suites(table: ConstantsTable, names: Iterable[str] = SUITES,
               trials: int = 1000, seed: int = 7) -> List[SuiteResult]:
    """
    指定されたスイートを順に実行する

    Args:
        table: 定数テーブル
        names: スイート名（clifford, onshell, snyder）
        trials: onshell スイートの試行回数
        seed: onshell スイートの乱数シード

    Returns:
        List[SuiteResult]: 指定順の結果
    """
    names = list(names)
    for name in names:
        if name not in SUITES:
            raise AlgebraError(f"unknown suite {name}")
    results = []
    for name in names:
        if name == "clifford":
            results.append(clifford_suite())
        elif name == "onshell":
            results.append(onshell_suite(table, trials, seed))
        else:
            results.append(snyder_suite(table))
        logger.info(f"スイート {name}: {'合格' if results[-1].passed else '不合格'}")
    return results
