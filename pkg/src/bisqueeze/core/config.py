"""
Configuration management for bisqueeze.

Settings are layered: built-in defaults, then an optional YAML file, then
environment variables (``.env`` files are honoured).
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator

from .errors import ConfigError

# Load environment variables
load_dotenv()

logger = structlog.get_logger(__name__)


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: str = Field(default="INFO", description="Logging level")
    json_output: bool = Field(default=False, description="Render log events as JSON lines")

    @field_validator("level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level '{value}'")
        return level


class NumericsConfig(BaseModel):
    """Tolerances shared by the covariance-matrix routines."""
    hermitian_tolerance: float = Field(default=1e-12, gt=0, description="Entrywise Hermiticity tolerance")
    physicality_tolerance: float = Field(default=1e-10, gt=0, description="Allowed negative eigenvalue of sigma + i*Omega")
    symplectic_tolerance: float = Field(default=1e-10, gt=0, description="Allowed deviation in S Omega S^dagger = Omega")
    pairing_tolerance: float = Field(default=1e-8, gt=0, description="Allowed mismatch between paired +/- eigenvalues")
    pinv_rcond: float = Field(default=1e-12, gt=0, description="Relative cutoff of the homodyne pseudoinverse")
    large_squeezing: float = Field(default=3.0, gt=0, description="Squeezing above which tolerances scale with the matrix norm")


class OracleConfig(BaseModel):
    """Truncated Fock-space oracle configuration."""
    n_max: int = Field(default=12, ge=1, description="Per-mode photon cutoff")
    norm_loss_bound: float = Field(default=1e-6, gt=0, description="Largest population tolerated on the cutoff boundary")
    max_dense_dimension: int = Field(default=2197, ge=1, description="Largest Hilbert-space dimension exponentiated densely")


class RuntimeConfig(BaseModel):
    """Parallelism settings."""
    threads: Optional[int] = Field(default=None, ge=1, description="Worker threads for sweeps (None: min(32, cpu_count))")

    def worker_count(self) -> int:
        if self.threads is not None:
            return self.threads
        return min(32, os.cpu_count() or 1)


class Config(BaseModel):
    """Main configuration object."""
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> "Config":
        """
        Load configuration from file and environment variables.

        Args:
            config_path: Path to a YAML configuration file

        Returns:
            Validated Config instance

        Raises:
            ConfigError: if the file is unreadable or a value fails validation
        """
        config_data: Dict[str, Any] = {}

        if config_path:
            path = Path(config_path)
            if not path.exists():
                raise ConfigError(f"Configuration file not found: {config_path}")
            file_config = load_yaml_mapping(path)
            config_data = cls._merge_configs(config_data, file_config)

        env_overrides = cls._get_env_overrides()
        config_data = cls._merge_configs(config_data, env_overrides)

        try:
            instance = cls(**config_data)
        except PydanticValidationError as e:
            raise config_error_from_pydantic(e) from e

        logger.debug("Configuration loaded", source=config_path or "defaults",
                     threads=instance.runtime.threads, n_max=instance.oracle.n_max)
        return instance

    @staticmethod
    def _get_env_overrides() -> Dict[str, Any]:
        """Extract configuration from environment variables."""
        env_config: Dict[str, Any] = {}

        level = os.getenv("BISQUEEZE_LOG_LEVEL") or os.getenv("LOG_LEVEL")
        if level:
            env_config.setdefault("logging", {})["level"] = level

        if os.getenv("BISQUEEZE_LOG_JSON"):
            env_config.setdefault("logging", {})["json_output"] = os.getenv("BISQUEEZE_LOG_JSON").lower() == "true"

        if os.getenv("BISQUEEZE_THREADS"):
            env_config.setdefault("runtime", {})["threads"] = _env_int("BISQUEEZE_THREADS")

        if os.getenv("BISQUEEZE_NMAX"):
            env_config.setdefault("oracle", {})["n_max"] = _env_int("BISQUEEZE_NMAX")

        return env_config

    @staticmethod
    def _merge_configs(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursively merge configuration dictionaries."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = Config._merge_configs(result[key], value)
            else:
                result[key] = value

        return result


def _env_int(name: str) -> int:
    raw = os.getenv(name, "")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"Environment variable {name} must be an integer, got '{raw}'", field=name)


def load_yaml_mapping(path: Path) -> Dict[str, Any]:
    """Read a YAML file that must contain a mapping; syntax errors keep their line number."""
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark is not None else None
        raise ConfigError(f"Invalid YAML in {path}: {e.problem}", line=line) from e
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"Top level of {path} must be a mapping")
    return data


def config_error_from_pydantic(error: PydanticValidationError) -> ConfigError:
    """Turn the first pydantic error into a ConfigError naming the offending field."""
    first = error.errors()[0]
    field = ".".join(str(part) for part in first.get("loc", ()))
    return ConfigError(first.get("msg", "invalid value"), field=field or None)


def configure_logging(level: str = "INFO", json_output: bool = False) -> None:
    """Route structlog through stdlib logging on stderr; stdout stays free for reports."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )

    renderer = structlog.processors.JSONRenderer() if json_output else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


# Global configuration instance
config = Config()


def use_config(new_config: Config) -> None:
    """Install a loaded configuration into the shared instance in place."""
    for name in type(new_config).model_fields:
        setattr(config, name, getattr(new_config, name))
