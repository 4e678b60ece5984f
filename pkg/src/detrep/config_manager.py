"""
Configuration management for detrep.

This module provides centralized configuration management with support for
YAML configuration files and environment variable overrides.
"""

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from detrep_core.determinants import DEFAULT_SYMBOLIC_BOUND, SIGN_CHECK_MAX_N
from detrep_core.xdg_paths import XDGPaths

logger = logging.getLogger(__name__)


@dataclass
class VerifyConfig:
    """Verification settings."""

    symbolic_bound: int = DEFAULT_SYMBOLIC_BOUND
    trials: int = 20
    seed: int = 0
    primes: list[int] = field(default_factory=list)  # empty means default primes
    samples: int = 20
    jobs: int = 1
    path_sign_check_bound: int = SIGN_CHECK_MAX_N


@dataclass
class BenchConfig:
    """Benchmark settings."""

    m_range: str = "2-7"
    strategies: list[str] = field(
        default_factory=lambda: ["ryser", "naive", "pencil-dense", "pencil-path"]
    )
    trials: int = 10
    seed: int = 0
    entry_bound: int = 9
    naive_max_m: int = 10
    dense_max_n: int = 255


@dataclass
class LoggingConfig:
    """Logging configuration settings."""

    level: str = "WARNING"
    file: str | None = None
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class OutputConfig:
    """Report rendering settings."""

    json_indent: int = 2
    pretty_width: int = 0  # 0 sizes columns to the widest entry


@dataclass
class Config:
    """Main configuration class containing all settings."""

    verify: VerifyConfig = field(default_factory=VerifyConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


def _env_int(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}") from e


class ConfigManager:
    """Manages configuration loading and access."""

    def __init__(self, config_file: str | Path | None = None):
        """Initialize configuration manager.

        Args:
            config_file: Path to configuration file. If None, uses default locations.
        """
        self.xdg_paths = XDGPaths()
        self.config_file = self._resolve_config_file(config_file)
        self._config: Config | None = None

    def _resolve_config_file(self, config_file: str | Path | None) -> Path | None:
        """Resolve configuration file path.

        Args:
            config_file: Explicit config file path or None

        Returns:
            Resolved path to config file or None if not found
        """
        if config_file:
            path = Path(config_file)
            if path.exists():
                return path
            return None

        xdg_config = self.xdg_paths.get_config_file()
        if xdg_config.exists():
            return xdg_config

        local_config = Path("config/default.yaml")
        if local_config.exists():
            return local_config

        root_config = Path("config.yaml")
        if root_config.exists():
            return root_config

        return None

    def load_config(self) -> Config:
        """Load configuration from file and environment variables.

        Returns:
            Loaded configuration object
        """
        if self._config is None:
            self._config = self._load_config()
        return self._config

    def reload_config(self) -> Config:
        """Force reload configuration from file and environment variables."""
        self._config = self._load_config()
        return self._config

    def _load_config(self) -> Config:
        """Internal method to load configuration."""
        config_data: dict[str, Any] = {}

        if self.config_file:
            try:
                with open(self.config_file) as f:
                    config_data = yaml.safe_load(f) or {}
                logger.debug(f"Configuration loaded from: {self.config_file}")
            except (OSError, yaml.YAMLError) as e:
                logger.warning(f"Failed to load config file {self.config_file}: {e}")

        config = self._create_config_from_dict(config_data)
        self._apply_env_overrides(config)
        return config

    def _create_config_from_dict(self, data: dict[str, Any]) -> Config:
        """Create Config object from dictionary data."""
        return Config(
            verify=VerifyConfig(**data.get("verify", {})),
            bench=BenchConfig(**data.get("bench", {})),
            logging=LoggingConfig(**data.get("logging", {})),
            output=OutputConfig(**data.get("output", {})),
        )

    def _apply_env_overrides(self, config: Config) -> None:
        """Apply environment variable overrides to configuration."""
        if (bound := _env_int("DETREP_SYMBOLIC_BOUND")) is not None:
            config.verify.symbolic_bound = bound
            logger.debug(f"Environment override: DETREP_SYMBOLIC_BOUND={bound}")
        if (trials := _env_int("DETREP_TRIALS")) is not None:
            config.verify.trials = trials
        if (seed := _env_int("DETREP_SEED")) is not None:
            config.verify.seed = seed
            config.bench.seed = seed
        if (jobs := _env_int("DETREP_JOBS")) is not None:
            config.verify.jobs = jobs

        if (log_level := os.getenv("DETREP_LOG_LEVEL")) is not None:
            config.logging.level = log_level
        if (log_file := os.getenv("DETREP_LOG_FILE")) is not None:
            config.logging.file = log_file

    def save_config(self, config: Config, file_path: str | Path | None = None) -> None:
        """Save configuration to file.

        Args:
            config: Configuration object to save
            file_path: Path to save to. If None, uses the current config file,
                or the user config file when none was loaded.
        """
        if file_path is None:
            file_path = self.config_file

        if file_path is None:
            file_path = self.xdg_paths.get_config_dir() / "config.yaml"

        Path(file_path).parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, "w") as f:
            yaml.dump(asdict(config), f, default_flow_style=False, indent=2)
        logger.info(f"Configuration saved to: {file_path}")

    def get_config_file_path(self) -> Path | None:
        """Get the path to the current configuration file."""
        return self.config_file


# Global configuration manager instance
_config_manager: ConfigManager | None = None


def get_config_manager(config_file: str | Path | None = None) -> ConfigManager:
    """Get the global configuration manager instance.

    Args:
        config_file: Path to configuration file (only used on first call)

    Returns:
        Configuration manager instance
    """
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager(config_file)
    return _config_manager


def load_config(config_file: str | Path | None = None) -> Config:
    """Load configuration using the global config manager."""
    return get_config_manager(config_file).load_config()
