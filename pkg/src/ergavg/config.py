"""Configuration management for ergavg."""

import json
from pathlib import Path
from typing import Any, Dict

import toml
from pydantic import BaseModel, Field, ValidationError

from ergavg.core.errors import DomainError
from ergavg.types import ExperimentConfig


class Config(BaseModel):
    """Lab-wide settings."""

    # Core settings
    debug: bool = Field(default=False, description="Enable debug mode")
    log_level: str = Field(default="warning", description="Logging level")

    # Output settings
    output_dir: Path = Field(default_factory=lambda: Path("./ergavg-out"))

    # Result store
    results_path: Path = Field(default_factory=lambda: Path("./ergavg-results"))
    results_map_size: int = Field(default=256 * 1024 * 1024, gt=0)  # 256MB

    # Trial execution
    workers: int = Field(default=1, ge=1, description="1 runs trials in-process")
    default_seed: int = Field(default=20240229, ge=0, lt=2**64)

    @classmethod
    def load_from_file(cls, config_path: Path) -> "Config":
        """Load configuration from TOML file."""
        if config_path.exists():
            data = toml.load(config_path)
            return cls(**data.get("ergavg", data))
        return cls()

    def save_to_file(self, config_path: Path) -> None:
        """Save configuration to TOML file."""
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w") as f:
            toml.dump(self.model_dump(mode="json"), f)

    @classmethod
    def get_default(cls) -> "Config":
        """Get default configuration."""
        return cls()


def _read_mapping(path: Path) -> Dict[str, Any]:
    suffix = path.suffix.lower()
    try:
        if suffix == ".toml":
            return toml.load(path)
        if suffix == ".json":
            return json.loads(path.read_text())
    except (OSError, ValueError, toml.TomlDecodeError) as exc:
        raise DomainError(f"cannot parse {path}: {exc}") from exc
    raise DomainError(f"experiment config must be .toml or .json, got {path.name}")


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Read an :class:`ExperimentConfig` from TOML or JSON.

    The file holds ``kind``, ``seed`` and an optional ``parameters`` table.
    """
    data = _read_mapping(Path(path))
    try:
        return ExperimentConfig(**data)
    except ValidationError as exc:
        raise DomainError(f"invalid experiment config {path}: {exc}") from exc
