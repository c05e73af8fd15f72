"""Basic unit tests for configuration."""

import pytest
from pydantic import ValidationError

from idslab.config import Settings, get_settings, reset_settings


def test_settings_default_values() -> None:
    """Test that settings have correct default values."""
    settings = Settings()

    assert settings.max_dense_dimension == 4096
    assert settings.ql_iteration_cap == 30
    assert settings.max_ball_radius == 2048
    assert settings.workers is None
    assert settings.log_level == "INFO"
    assert settings.log_file is None


def test_settings_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Environment variables with the IDSLAB_ prefix override defaults."""
    monkeypatch.setenv("IDSLAB_MAX_DENSE_DIMENSION", "512")
    monkeypatch.setenv("IDSLAB_WORKERS", "3")
    monkeypatch.setenv("IDSLAB_LOG_LEVEL", "DEBUG")

    settings = Settings()

    assert settings.max_dense_dimension == 512
    assert settings.workers == 3
    assert settings.log_level == "DEBUG"


def test_settings_reject_invalid_values(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("IDSLAB_QL_ITERATION_CAP", "0")
    with pytest.raises(ValidationError):
        Settings()


def test_get_settings_singleton(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that get_settings returns the same instance."""
    monkeypatch.setenv("IDSLAB_MAX_BFS_DEPTH", "99")

    settings1 = get_settings()
    settings2 = get_settings()

    assert settings1 is settings2
    assert settings1.max_bfs_depth == 99


def test_reset_settings() -> None:
    """Test that reset_settings clears the singleton."""
    settings1 = get_settings()
    reset_settings()

    settings2 = get_settings()

    # Should be different instances after reset
    assert settings1 is not settings2
