"""
Unit tests for XDG paths management.
"""

import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from detrep_core.xdg_paths import XDGPaths, get_xdg_config_home


class TestXDGPaths(unittest.TestCase):
    """Test XDG paths functionality."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test fixtures."""
        shutil.rmtree(self.temp_dir)

    def test_xdg_paths_creation(self):
        """Test XDGPaths object creation."""
        self.assertEqual(XDGPaths().app_name, "detrep")
        self.assertEqual(XDGPaths("custom-app").app_name, "custom-app")

    def test_environment_variables(self):
        """Test that XDG_CONFIG_HOME is respected."""
        config_home = Path(self.temp_dir) / "config"
        with patch.dict(os.environ, {"XDG_CONFIG_HOME": str(config_home)}):
            self.assertEqual(get_xdg_config_home(), config_home)

            xdg = XDGPaths()
            config_dir = xdg.get_config_dir()
            profiles_dir = xdg.get_config_dir("profiles")

            self.assertEqual(config_dir, config_home / "detrep")
            self.assertEqual(profiles_dir, config_home / "detrep" / "profiles")
            self.assertTrue(config_dir.is_dir())
            self.assertTrue(profiles_dir.is_dir())
            self.assertEqual(xdg.get_config_file(), config_dir / "config.yaml")

    def test_home_fallback(self):
        """Test the default under HOME when XDG_CONFIG_HOME is unset."""
        environment = {key: value for key, value in os.environ.items() if key != "XDG_CONFIG_HOME"}
        environment["HOME"] = self.temp_dir
        with patch.dict(os.environ, environment, clear=True):
            self.assertEqual(get_xdg_config_home(), Path(self.temp_dir) / ".config")

    def test_get_config_file_does_not_create(self):
        """Test that looking up the config file creates nothing."""
        with patch.dict(os.environ, {"XDG_CONFIG_HOME": self.temp_dir}):
            path = XDGPaths().get_config_file()
        self.assertFalse(path.exists())
        self.assertFalse(path.parent.exists())


if __name__ == "__main__":
    unittest.main()
