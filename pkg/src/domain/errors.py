"""
ドメイン層の例外クラス
"""


class ComptonLedgerError(ValueError):
    """compton-ledger の全例外の基底クラス"""


class QuantityError(ComptonLedgerError):
    """次元付き量の演算エラー"""


class DimensionMismatchError(QuantityError):
    """次元が一致しない量どうしの演算"""


class ConstantsFileError(ComptonLedgerError):
    """定数ファイルの読み込み・整合性エラー"""


class ExpressionError(ComptonLedgerError):
    """式木の構文・評価エラー"""


class RelationError(ComptonLedgerError):
    """関係式レジストリの定義・実行エラー"""


class AlgebraError(ComptonLedgerError):
    """行列代数の検証エラー"""


class SimulationError(ComptonLedgerError):
    """宇宙論シミュレーションの設定・実行エラー"""


class ParticleError(ComptonLedgerError):
    """素粒子セクターの評価エラー"""


class InvocationError(ComptonLedgerError):
    """CLI の引数・設定の誤り"""
