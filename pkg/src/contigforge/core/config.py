"""Configuration management for the contigforge pipeline."""

import math
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..constants import (
    APP_CONFIG_PATH,
    CONFIG_PATH_ENV,
    DEFAULT_FUZZ,
    DEFAULT_K,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_KMER_FREQ,
    DEFAULT_MAX_MSG_BYTES,
    DEFAULT_MIN_OVERLAP,
    DEFAULT_SEED,
)
from .errors import ConfigError


class SynthConfig(BaseModel):
    """Parameters of the synthetic genome and read generator."""

    genome_length: int = Field(default=10_000, gt=0)
    read_length: int = Field(default=200, gt=0)
    coverage: float = Field(default=30.0, ge=1.0)

    @model_validator(mode="after")
    def check_read_length(self) -> "SynthConfig":
        """Reads must be shorter than the genome."""
        if self.read_length >= self.genome_length:
            raise ValueError("read_length must be smaller than genome_length")
        return self


class PipelineConfig(BaseModel):
    """Parameters of one pipeline run."""

    k: int = DEFAULT_K
    min_overlap: int = DEFAULT_MIN_OVERLAP
    fuzz: int = Field(default=DEFAULT_FUZZ, ge=0)
    grid: int = Field(default=1, ge=1)
    max_msg_bytes: int = Field(default=DEFAULT_MAX_MSG_BYTES, ge=1)
    max_kmer_freq: int = Field(default=DEFAULT_MAX_KMER_FREQ, ge=1)
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1)
    seed: int = DEFAULT_SEED
    workers: int = Field(default=1, ge=1)

    input_path: Optional[Path] = None
    string_graph_path: Optional[Path] = None
    reference_path: Optional[Path] = None
    output_path: Optional[Path] = None
    report_path: Optional[Path] = None
    ledger_path: Optional[Path] = None
    chains_path: Optional[Path] = None
    dump_dir: Optional[Path] = None

    emit_singletons: bool = False
    synth: SynthConfig = Field(default_factory=SynthConfig)

    @field_validator("k")
    @classmethod
    def check_k(cls, v: int) -> int:
        """k must be a positive odd integer."""
        if v < 1 or v % 2 == 0:
            raise ValueError(f"k must be a positive odd integer, got {v}")
        return v

    @field_validator("grid")
    @classmethod
    def check_grid(cls, v: int) -> int:
        """The virtual grid must be square."""
        side = math.isqrt(v)
        if side * side != v:
            raise ValueError(f"grid size {v} is not a perfect square")
        return v

    @model_validator(mode="after")
    def check_min_overlap(self) -> "PipelineConfig":
        """Overlaps shorter than one k-mer cannot be seeded."""
        if self.min_overlap < self.k:
            raise ValueError(f"min overlap t={self.min_overlap} must be >= k={self.k}")
        return self


def build_config(**values: Any) -> PipelineConfig:
    """Construct a config, turning validation failures into ConfigError."""
    try:
        return PipelineConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


def override_config(config: PipelineConfig, **updates: Any) -> PipelineConfig:
    """Apply non-None overrides (CLI flags) and re-validate."""
    merged = config.model_dump()
    merged.update({key: value for key, value in updates.items() if value is not None})
    return build_config(**merged)


def resolve_config_path(config_path: Optional[Path] = None) -> Path:
    """Explicit path, then $CONTIGFORGE_CONFIG, then the default location."""
    if config_path is not None:
        return config_path
    env_path = os.getenv(CONFIG_PATH_ENV)
    return Path(env_path) if env_path else APP_CONFIG_PATH


def load_config(config_path: Optional[Path] = None, required: bool = False) -> PipelineConfig:
    """Load configuration from YAML; a missing optional file yields the defaults."""
    config_path = resolve_config_path(config_path)

    if not config_path.exists():
        if required:
            raise ConfigError(f"Configuration file not found: {config_path}")
        return PipelineConfig()

    with open(config_path, "r") as f:
        config_data = yaml.safe_load(f) or {}

    if not isinstance(config_data, dict):
        raise ConfigError(f"Configuration file {config_path} must hold a mapping")
    return build_config(**config_data)


def create_sample_config(config_path: Optional[Path] = None) -> None:
    """Create a sample configuration file."""
    config_path = resolve_config_path(config_path)
    config_path.parent.mkdir(parents=True, exist_ok=True)

    sample_config: Dict[str, Any] = {
        "k": DEFAULT_K,
        "min_overlap": DEFAULT_MIN_OVERLAP,
        "fuzz": DEFAULT_FUZZ,
        "grid": 1,
        "max_msg_bytes": DEFAULT_MAX_MSG_BYTES,
        "max_kmer_freq": DEFAULT_MAX_KMER_FREQ,
        "max_iterations": DEFAULT_MAX_ITERATIONS,
        "seed": DEFAULT_SEED,
        "emit_singletons": False,
        "synth": {"genome_length": 10_000, "read_length": 200, "coverage": 30.0},
    }

    with open(config_path, "w") as f:
        yaml.dump(sample_config, f, default_flow_style=False, indent=2)

    print(f"Sample configuration created at: {config_path}")
