"""Shared pytest fixtures for detrep tests."""

import pytest

DETREP_ENV = (
    "DETREP_SYMBOLIC_BOUND",
    "DETREP_TRIALS",
    "DETREP_SEED",
    "DETREP_JOBS",
    "DETREP_LOG_LEVEL",
    "DETREP_LOG_FILE",
)


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """Keep user configuration and DETREP_* overrides out of the tests."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    for name in DETREP_ENV:
        monkeypatch.delenv(name, raising=False)
    yield
