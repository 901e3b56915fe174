"""
テスト共通のフィクスチャ
"""
import pytest

from src.config.settings import DEFAULT_CONSTANTS_PATH, ConfigManager
from src.infrastructure.constants.constants_file import ConstantsFileRepository


@pytest.fixture(scope="session")
def table():
    """同梱の定数ファイルから読み込んだテーブル"""
    return ConstantsFileRepository(DEFAULT_CONSTANTS_PATH).load()


@pytest.fixture(scope="session")
def constants_text():
    with open(DEFAULT_CONSTANTS_PATH, "r", encoding="utf-8") as f:
        return f.read()


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """ConfigManager のシングルトンと環境変数をテストごとに初期化する"""
    monkeypatch.delenv("COMPTON_LEDGER_CONSTANTS", raising=False)
    monkeypatch.chdir(tmp_path)
    ConfigManager.reset()
    yield
    ConfigManager.reset()
