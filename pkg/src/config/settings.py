"""
設定の読み込みと管理を行うモジュール
"""
import copy
import json
import os
from typing import Any, Dict, Optional

from src.config.logger import get_module_logger

logger = get_module_logger("settings")

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
DEFAULT_CONSTANTS_PATH = os.path.join(PROJECT_ROOT, "src", "data", "constants_v1.txt")
CONSTANTS_ENV_VAR = "COMPTON_LEDGER_CONSTANTS"

DEFAULT_CONFIG: Dict[str, Any] = {
    "constants": {
        "path": None,
    },
    "relations": {
        "path": None,
        "tolerances": {},
        "workers": 1,
    },
    "simulation": {
        "N0": 1.0,
        "dt": "0.1tau",
        "t_end": "1000tau",
        "mode": "deterministic",
        "seed": None,
        "ensemble_size": 1,
        "output_stride": 1,
        "scale": "pion",
        "workers": 1,
    },
    "algebra": {
        "suites": ["clifford", "onshell", "snyder"],
        "trials": 1000,
        "seed": 7,
    },
    "particles": {
        "alpha": 1.0,
        "beta_scale": 1.0,
        "mass_key": "m_pi",
    },
    "output": {
        "format": "text",
    },
}


class ConfigManager:
    """設定を管理するクラス"""

    _instance = None
    _config = None

    def __new__(cls, config_file: str = None):
        """シングルトンパターンを実装"""
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
            cls._instance._load_config(config_file)
        return cls._instance

    def __init__(self, config_file: str = None):
        """既に__new__で初期化済みなので何もしない"""
        pass

    @classmethod
    def reset(cls) -> None:
        """シングルトンを破棄する（テスト用）"""
        cls._instance = None
        cls._config = None

    @staticmethod
    def _find_config_file(config_file: Optional[str]) -> Optional[str]:
        if config_file is not None:
            return config_file
        # カレントディレクトリ、次にプロジェクトルートの config.json
        for candidate in ("config.json", os.path.join(PROJECT_ROOT, "config.json")):
            if os.path.exists(candidate):
                return candidate
        return None

    def _load_config(self, config_file: Optional[str] = None) -> None:
        """設定ファイルを読み込み、既定値にマージする"""
        self._config = copy.deepcopy(DEFAULT_CONFIG)
        path = self._find_config_file(config_file)
        if path is None:
            logger.debug("設定ファイルがないため既定値を使います")
            return
        try:
            with open(path, "r", encoding="utf-8") as f:
                loaded = json.load(f)
            if not isinstance(loaded, dict):
                raise ValueError("top level must be an object")
        except (OSError, ValueError) as e:
            logger.warning(f"設定ファイルの読み込みに失敗しました: {e}（既定値を使います）")
            return
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(self._config.get(section), dict):
                self._config[section].update(values)
            else:
                self._config[section] = values
        logger.info(f"設定を読み込みました: {path}")

    def get(self, section: str, key: str = None, default: Any = None) -> Any:
        """
        設定値を取得する

        Args:
            section: 設定セクション名（constants, relations, simulation など）
            key: キー名（省略時はセクション全体を返す）
            default: 設定が存在しない場合のデフォルト値

        Returns:
            設定値またはデフォルト値
        """
        if section not in self._config:
            return default

        if key is None:
            return self._config[section]

        value = self._config[section].get(key, default)
        return default if value is None else value

    def get_simulation_config(self) -> Dict[str, Any]:
        return dict(self.get("simulation", default={}))

    def get_particles_config(self) -> Dict[str, Any]:
        return dict(self.get("particles", default={}))

    def resolve_constants_path(self, cli_path: Optional[str] = None) -> str:
        """
        定数ファイルのパスを決める

        優先順位: CLI の --constants、環境変数、設定ファイル、同梱のデータファイル
        """
        for candidate in (cli_path, os.environ.get(CONSTANTS_ENV_VAR),
                          self.get("constants", "path")):
            if candidate:
                return candidate
        return DEFAULT_CONSTANTS_PATH

    def reload(self, config_file: str = None) -> None:
        """設定を再読み込みする"""
        self._load_config(config_file)
