"""
ロガーの生成を行うモジュール
"""
import logging
import sys

ROOT_LOGGER_NAME = "compton_ledger"
_LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"

_configured = False


def _configure_root() -> logging.Logger:
    """ルートロガーに標準エラー出力のハンドラを一度だけ設定する"""
    global _configured
    root = logging.getLogger(ROOT_LOGGER_NAME)
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False
        _configured = True
    return root


def get_module_logger(name: str) -> logging.Logger:
    """
    モジュール用のロガーを取得する

    Args:
        name: モジュール名（例: 'quantity'）

    Returns:
        logging.Logger: compton_ledger 配下の子ロガー
    """
    _configure_root()
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def set_verbosity(verbose: bool) -> None:
    """詳細ログの有無を切り替える"""
    _configure_root().setLevel(logging.DEBUG if verbose else logging.WARNING)
