"""XDG Base Directory specification helper for detrep."""

import os
from pathlib import Path

APP_NAME = "detrep"


class XDGPaths:
    """XDG paths manager class."""

    def __init__(self, app_name: str = APP_NAME):
        """Initialize XDG paths manager.

        Args:
            app_name: Application name for path construction
        """
        self.app_name = app_name

    def get_config_dir(self, subpath: str = "") -> Path:
        """Get XDG config directory, creating it if needed.

        Args:
            subpath: Optional subpath within config directory

        Returns:
            Path to config directory
        """
        config_dir = get_xdg_config_home() / self.app_name
        if subpath:
            config_dir = config_dir / subpath
        config_dir.mkdir(parents=True, exist_ok=True)
        return config_dir

    def get_config_file(self) -> Path:
        """Path of the user configuration file (may not exist)."""
        return get_xdg_config_home() / self.app_name / "config.yaml"


def get_xdg_config_home() -> Path:
    """Get XDG_CONFIG_HOME directory (default: ~/.config)."""
    return Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
