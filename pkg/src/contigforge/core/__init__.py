"""Core configuration and error types for contigforge."""

from .config import (
    PipelineConfig,
    SynthConfig,
    build_config,
    create_sample_config,
    load_config,
    override_config,
)
from .errors import ConfigError, ContigForgeError, StageError

__all__ = [
    "PipelineConfig",
    "SynthConfig",
    "build_config",
    "create_sample_config",
    "load_config",
    "override_config",
    "ConfigError",
    "ContigForgeError",
    "StageError",
]
