"""
ConfigManager のテスト
"""
import json

from src.config.settings import CONSTANTS_ENV_VAR, DEFAULT_CONSTANTS_PATH, ConfigManager


def test_defaults_without_config_file():
    config = ConfigManager()
    assert config.get("simulation", "dt") == "0.1tau"
    assert config.get("algebra", "trials") == 1000
    assert config.get("missing", "key", "fallback") == "fallback"
    assert config.get("relations", "path", "x") == "x"


def test_singleton():
    assert ConfigManager() is ConfigManager()


def test_config_file_is_merged_into_defaults(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"simulation": {"dt": "0.5tau"}, "extra": {"a": 1}}), encoding="utf-8")
    config = ConfigManager(str(path))
    assert config.get("simulation", "dt") == "0.5tau"
    assert config.get("simulation", "t_end") == "1000tau"
    assert config.get("extra", "a") == 1


def test_config_json_in_working_directory_is_found(tmp_path):
    (tmp_path / "config.json").write_text(json.dumps({"output": {"format": "json"}}), encoding="utf-8")
    assert ConfigManager().get("output", "format") == "json"


def test_broken_config_falls_back_to_defaults(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    config = ConfigManager(str(path))
    assert config.get("output", "format") == "text"


def test_section_copies_do_not_leak():
    config = ConfigManager()
    sim = config.get_simulation_config()
    sim["dt"] = "1tau"
    assert config.get("simulation", "dt") == "0.1tau"


def test_constants_path_resolution_order(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"constants": {"path": "from_config.txt"}}), encoding="utf-8")
    config = ConfigManager(str(path))
    assert config.resolve_constants_path("cli.txt") == "cli.txt"
    monkeypatch.setenv(CONSTANTS_ENV_VAR, "env.txt")
    assert config.resolve_constants_path() == "env.txt"
    monkeypatch.delenv(CONSTANTS_ENV_VAR)
    assert config.resolve_constants_path() == "from_config.txt"
    config.reload()
    assert config.resolve_constants_path() == DEFAULT_CONSTANTS_PATH
