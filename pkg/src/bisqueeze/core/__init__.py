# Core infrastructure for bisqueeze

from .cache import ComputationCache, computation_cache
from .config import Config, config, configure_logging, use_config
from .errors import (
    BisqueezeError,
    ConfigError,
    DimensionError,
    EigenvalueError,
    InvalidModeError,
    InvalidParameterError,
    NonPhysicalStateError,
    NumericalError,
    TruncationError,
    ValidationError,
)

__all__ = [
    "ComputationCache",
    "computation_cache",
    "Config",
    "config",
    "configure_logging",
    "use_config",
    "BisqueezeError",
    "ConfigError",
    "DimensionError",
    "EigenvalueError",
    "InvalidModeError",
    "InvalidParameterError",
    "NonPhysicalStateError",
    "NumericalError",
    "TruncationError",
    "ValidationError",
]
