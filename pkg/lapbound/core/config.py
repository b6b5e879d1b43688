"""
lapbound - Settings Configuration

Numerical tolerances, size caps and runtime options, overridable through
``LAPBOUND_*`` environment variables or a local ``.env`` file.
"""

import os
from typing import Optional, Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings with environment variable overrides.

    Every tolerance and cap used by the services is read from here so a
    single ``LAPBOUND_*`` variable changes behaviour everywhere.
    """

    model_config = SettingsConfigDict(
        env_prefix="LAPBOUND_",
        env_file=".env",
        extra="ignore",
    )

    # Application metadata
    APP_NAME: str = "lapbound"
    VERSION: str = "1.0.0"

    # Logging configuration
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Parallelism for verify/experiment trials (0 = one worker per CPU)
    THREADS: int = Field(default=0, ge=0)

    # Numerical tolerances
    EIGEN_TOL: float = Field(default=1e-10, gt=0.0)
    NULLITY_TOL: float = Field(default=1e-8, gt=0.0)
    SLACK_TOL: float = Field(default=1e-8, gt=0.0)
    SUM_CUSHION: float = Field(default=1e-9, ge=0.0)

    # Size caps
    MAX_DENSE_ORDER: int = Field(default=4000, ge=1)
    MAX_COMPOUND_ORDER: int = Field(default=4000, ge=1)
    ENUMERATION_LIMIT: int = Field(default=100_000, ge=1)
    FACE_BUDGET: int = Field(default=2_000_000, ge=1)
    DELTA_BUDGET: int = Field(default=5_000_000, ge=1)

    # Two fixed 31-bit primes for modular rank
    RANK_PRIMES: Tuple[int, int] = (2147483647, 2147483629)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get settings instance following singleton pattern.

    Returns:
        Settings instance with all required attributes
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next call re-reads the environment."""
    global _settings
    _settings = None


def worker_count() -> int:
    """Resolve ``THREADS`` to a concrete worker count."""
    threads = get_settings().THREADS
    if threads == 0:
        return os.cpu_count() or 1
    return threads
