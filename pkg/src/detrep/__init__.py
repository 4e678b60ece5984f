"""
detrep - build, verify and benchmark exact determinantal representations.

This package is the application layer over ``detrep_core``: configuration,
the verification suite runner, the benchmark runner and the CLI.
"""

__version__ = "0.1.0"

from detrep_core.constructions import create_pencil, list_available_constructions
from detrep_core.pencil import PencilMatrix, export_pencil, import_pencil

from .bench import BenchOptions, BenchResult, run_bench
from .config_manager import ConfigManager, load_config
from .main import main
from .verification import SuiteReport, VerifyOptions, run_verification

__all__ = [
    "BenchOptions",
    "BenchResult",
    "ConfigManager",
    "PencilMatrix",
    "SuiteReport",
    "VerifyOptions",
    "create_pencil",
    "export_pencil",
    "import_pencil",
    "list_available_constructions",
    "load_config",
    "main",
    "run_bench",
    "run_verification",
]
