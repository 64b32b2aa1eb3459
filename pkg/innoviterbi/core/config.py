"""Configuration management for the workbench."""

import json
import os
import tomllib
from pathlib import Path
from typing import Any, Literal

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from .convcode import load_code
from .exceptions import ConfigurationError

CONFIG_DIR_NAME = "innoviterbi"


def _load_dotenv_files() -> None:
    """Load .env files from the user config directory and the current directory.

    Priority (later files override earlier):
    1. ~/.config/innoviterbi/.env (user-level config)
    2. .env in current working directory (project-level config)
    """
    user_config_env = Path.home() / ".config" / CONFIG_DIR_NAME / ".env"
    if user_config_env.exists():
        load_dotenv(user_config_env)

    load_dotenv(find_dotenv(usecwd=True), override=True)


_load_dotenv_files()


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class WorkbenchConfig(BaseModel):
    """Persistent defaults for experiments."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    default_code: str = "C1"
    seed: int = 1
    frames: int = Field(default=1000, ge=0)
    frame_blocks: int = Field(default=200, ge=1)
    sim_blocks: int = Field(default=100_000, ge=1)
    ebn0_db: list[float] = Field(default_factory=lambda: [float(x) for x in range(11)])
    l0: list[int] = Field(default_factory=lambda: [10, 15, 20, 25, 30])
    start_offset: int = Field(default=1, ge=0)
    threads: int = Field(default=1, ge=1)
    output_format: Literal["csv", "json"] = "csv"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    quantize_levels: Literal[0, 8] = 0
    quantize_step: float | None = Field(default=None, gt=0)

    @field_validator("ebn0_db", "l0", mode="before")
    @classmethod
    def _comma_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper(cls, value: Any) -> Any:
        return value.upper() if isinstance(value, str) else value

    @field_validator("quantize_levels", mode="before")
    @classmethod
    def _levels(cls, value: Any) -> Any:
        return int(value) if isinstance(value, str) and value.strip().isdigit() else value


ENV_KEYS = {
    "threads": "INNOVITERBI_THREADS",
    "seed": "INNOVITERBI_SEED",
    "default_code": "INNOVITERBI_CODE",
    "log_level": "INNOVITERBI_LOG_LEVEL",
}


class Config:
    """Configuration manager backed by ~/.config/innoviterbi/config.json."""

    def __init__(self, config_path: Path | str | None = None):
        self.config_path = Path(config_path) if config_path is not None else self._get_default_config_path()
        self._config = self._load_config()

    def _get_default_config_path(self) -> Path:
        config_dir = Path.home() / ".config" / CONFIG_DIR_NAME
        config_dir.mkdir(parents=True, exist_ok=True)
        return config_dir / "config.json"

    def _load_config(self) -> WorkbenchConfig:
        """Load from the config file, else from environment variables."""
        if self.config_path.exists():
            try:
                with open(self.config_path) as f:
                    return WorkbenchConfig(**json.load(f))
            except (json.JSONDecodeError, PydanticValidationError, TypeError) as e:
                raise ConfigurationError(f"invalid config file {self.config_path}: {e}") from e

        env = {key: os.environ[var] for key, var in ENV_KEYS.items() if os.getenv(var)}
        try:
            return WorkbenchConfig(**env)
        except PydanticValidationError as e:
            raise ConfigurationError(f"invalid environment configuration: {e}") from e

    def save_config(self) -> None:
        """Save configuration to file."""
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, "w") as f:
                json.dump(self._config.model_dump(exclude_none=True), f, indent=2)
        except OSError as e:
            raise ConfigurationError(f"cannot write {self.config_path}: {e}") from e

    def get(self, key: str, default: Any = None) -> Any:
        """Get a value; dotted keys index into list fields (``l0.0``)."""
        value: Any = self._config.model_dump()
        for part in key.split("."):
            if isinstance(value, dict) and part in value:
                value = value[part]
            elif isinstance(value, list) and part.isdigit() and int(part) < len(value):
                value = value[int(part)]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> None:
        """Validate and persist a value."""
        if key not in WorkbenchConfig.model_fields:
            raise ConfigurationError(f"Unknown configuration key: {key}")
        try:
            setattr(self._config, key, value)
        except PydanticValidationError as e:
            raise ConfigurationError(f"invalid value for {key}: {e.errors()[0]['msg']}") from e
        self.save_config()

    def reset(self) -> None:
        """Drop the config file and return to defaults."""
        if self.config_path.exists():
            self.config_path.unlink()
        self._config = WorkbenchConfig()

    @property
    def config(self) -> WorkbenchConfig:
        return self._config


class ExperimentConfig(BaseModel):
    """Inputs of one table or simulation run; file values are overridden by CLI options."""

    model_config = ConfigDict(extra="forbid")

    code: str = "C1"
    ebn0_db: list[float] = Field(default_factory=lambda: [float(x) for x in range(11)])
    frames: int = Field(default=1000, ge=0)
    frame_blocks: int = Field(default=200, ge=1)
    sim_blocks: int = Field(default=100_000, ge=1)
    seed: int = 1
    l0: list[int] = Field(default_factory=lambda: [10, 15, 20, 25, 30])
    start_offset: int = Field(default=1, ge=0)
    decoders: list[str] = Field(default_factory=lambda: ["viterbi", "sst-general"])
    output: Path | None = None
    output_format: Literal["csv", "json"] = "csv"
    threads: int = Field(default=1, ge=1)
    quantize_levels: Literal[0, 8] = 0
    quantize_step: float | None = Field(default=None, gt=0)

    @field_validator("ebn0_db", "l0", "decoders", mode="before")
    @classmethod
    def _comma_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @model_validator(mode="after")
    def _code_resolves(self) -> "ExperimentConfig":
        load_code(self.code)
        return self

    @classmethod
    def from_workbench(cls, cfg: WorkbenchConfig, **overrides: Any) -> "ExperimentConfig":
        base = {
            "code": cfg.default_code,
            "ebn0_db": cfg.ebn0_db,
            "frames": cfg.frames,
            "frame_blocks": cfg.frame_blocks,
            "sim_blocks": cfg.sim_blocks,
            "seed": cfg.seed,
            "l0": cfg.l0,
            "start_offset": cfg.start_offset,
            "output_format": cfg.output_format,
            "threads": cfg.threads,
            "quantize_levels": cfg.quantize_levels,
            "quantize_step": cfg.quantize_step,
        }
        base.update({k: v for k, v in overrides.items() if v is not None})
        return build_experiment(base)


def build_experiment(data: dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig(**data)
    except PydanticValidationError as e:
        raise ConfigurationError(f"invalid experiment configuration: {e}") from e


def load_experiment(path: Path | str) -> dict[str, Any]:
    """Read raw experiment values from a JSON or TOML file."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"experiment file {path} does not exist")
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(path.read_text())
        return json.loads(path.read_text())
    except (ValueError, OSError) as e:
        raise ConfigurationError(f"cannot read experiment file {path}: {e}") from e
