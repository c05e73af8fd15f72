"""Runtime settings for idslab."""

from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="IDSLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Group / graph bounds
    max_ball_radius: int = Field(default=2048, ge=1)  # memoised BFS balls
    max_bfs_depth: int = Field(default=4096, ge=1)  # distance queries

    # Eigensolver
    max_dense_dimension: int = Field(default=4096, ge=1)
    ql_iteration_cap: int = Field(default=30, ge=1)  # sweeps per eigenvalue

    # Worker pool (None = available parallelism)
    workers: Optional[int] = Field(default=None, ge=1)

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    log_file: Optional[str] = None


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Reset the global settings instance (useful for testing)."""
    global _settings
    _settings = None
