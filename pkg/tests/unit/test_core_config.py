"""Tests for configuration management."""

import json

import pytest

from innoviterbi.core import Config
from innoviterbi.core.config import ENV_KEYS, ExperimentConfig, WorkbenchConfig, load_experiment
from innoviterbi.core.exceptions import ConfigurationError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep INNOVITERBI_* variables of the calling shell out of the tests."""
    for var in ENV_KEYS.values():
        monkeypatch.delenv(var, raising=False)


def test_config_creation(temp_config_dir):
    """Test configuration creation."""
    config = Config(config_path=temp_config_dir / "config.json")
    assert config.config_path.parent == temp_config_dir
    assert not config.config_path.exists()


def test_default_values(temp_config_dir):
    """Test default configuration values."""
    config = Config(config_path=temp_config_dir / "config.json")

    assert config.get("default_code") == "C1"
    assert config.get("frames") == 1000
    assert config.get("l0") == [10, 15, 20, 25, 30]
    assert config.get("ebn0_db") == [float(x) for x in range(11)]
    assert config.get("output_format") == "csv"
    assert config.get("quantize_step") is None


def test_config_persistence(temp_config_dir):
    """Test configuration persistence."""
    config_path = temp_config_dir / "config.json"

    config1 = Config(config_path=config_path)
    config1.set("seed", "42")
    config1.set("l0", "20,25")

    config2 = Config(config_path=config_path)
    assert config2.get("seed") == 42
    assert config2.get("l0") == [20, 25]
    assert json.loads(config_path.read_text())["seed"] == 42


def test_dotted_get(temp_config_dir):
    """Test indexing into list values."""
    config = Config(config_path=temp_config_dir / "config.json")
    assert config.get("l0.0") == 10
    assert config.get("l0.9") is None
    assert config.get("missing", "fallback") == "fallback"


def test_set_invalid_key(temp_config_dir):
    """Test setting invalid configuration key."""
    config = Config(config_path=temp_config_dir / "config.json")

    with pytest.raises(ConfigurationError, match="Unknown configuration key"):
        config.set("invalid_key", "value")


def test_set_invalid_value(temp_config_dir):
    """Test that values are validated before they are stored."""
    config = Config(config_path=temp_config_dir / "config.json")

    with pytest.raises(ConfigurationError):
        config.set("threads", "0")
    with pytest.raises(ConfigurationError):
        config.set("output_format", "xml")
    assert config.get("threads") == 1


def test_log_level_is_normalized(temp_config_dir):
    """Test case-insensitive log levels."""
    config = Config(config_path=temp_config_dir / "config.json")
    config.set("log_level", "debug")
    assert config.get("log_level") == "DEBUG"


def test_reset(temp_config_dir):
    """Test dropping the stored configuration."""
    config = Config(config_path=temp_config_dir / "config.json")
    config.set("frames", "5")
    config.reset()
    assert config.get("frames") == 1000
    assert not config.config_path.exists()


def test_invalid_config_file(temp_config_dir):
    """Test that a corrupt config file is reported."""
    path = temp_config_dir / "config.json"
    path.write_text("{not json")
    with pytest.raises(ConfigurationError):
        Config(config_path=path)
    path.write_text(json.dumps({"frames": -1}))
    with pytest.raises(ConfigurationError):
        Config(config_path=path)


def test_environment_defaults(temp_config_dir, monkeypatch):
    """Test INNOVITERBI_* variables when no config file exists."""
    monkeypatch.setenv("INNOVITERBI_THREADS", "4")
    monkeypatch.setenv("INNOVITERBI_CODE", "C2")
    config = Config(config_path=temp_config_dir / "config.json")
    assert config.get("threads") == 4
    assert config.get("default_code") == "C2"


def test_invalid_environment(temp_config_dir, monkeypatch):
    """Test that a bad environment value is reported."""
    monkeypatch.setenv("INNOVITERBI_THREADS", "many")
    with pytest.raises(ConfigurationError):
        Config(config_path=temp_config_dir / "config.json")


def test_experiment_from_workbench():
    """Test that explicit overrides win and None keeps the stored default."""
    base = WorkbenchConfig(seed=9, frames=12)
    exp = ExperimentConfig.from_workbench(base, frames=3, seed=None, decoders="viterbi, sst-qli")
    assert exp.seed == 9
    assert exp.frames == 3
    assert exp.decoders == ["viterbi", "sst-qli"]
    assert exp.code == "C1"


def test_experiment_rejects_unknown_code():
    """Test that the code id is resolved up front."""
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_workbench(WorkbenchConfig(), code="C9")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_workbench(WorkbenchConfig(), frames=-2)


def test_load_experiment(tmp_path):
    """Test JSON and TOML experiment files."""
    toml_file = tmp_path / "exp.toml"
    toml_file.write_text('code = "C2"\nebn0_db = [4.0, 5.0]\nframes = 10\n')
    assert load_experiment(toml_file) == {"code": "C2", "ebn0_db": [4.0, 5.0], "frames": 10}

    json_file = tmp_path / "exp.json"
    json_file.write_text(json.dumps({"seed": 3}))
    assert load_experiment(json_file) == {"seed": 3}

    with pytest.raises(ConfigurationError):
        load_experiment(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("code = ")
    with pytest.raises(ConfigurationError):
        load_experiment(bad)
