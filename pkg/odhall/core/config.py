"""Process-level configuration management.

This module handles environment detection, .env file loading and the
settings that steer logging, FFT threading and propagator construction.
Run-level parameters (grid, time step, physics) live in the INI run
configuration validated by ``odhall.schemas.run_config``; nothing in here
changes the numbers a run produces.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import (
    BaseSettings,
    SettingsConfigDict,
)


class Environment(str, Enum):
    """Execution environment types.

    Defines the possible environments the tool can run in:
    development, staging, production, and test.
    """

    DEVELOPMENT = "development"
    STAGING = "staging"
    PRODUCTION = "production"
    TEST = "test"


def get_environment() -> Environment:
    """Get the current environment.

    Returns:
        Environment: The current environment (development, staging, production, or test)
    """
    match os.getenv("ODHALL_APP_ENV", "development").lower():
        case "production" | "prod":
            return Environment.PRODUCTION
        case "staging" | "stage":
            return Environment.STAGING
        case "test":
            return Environment.TEST
        case _:
            return Environment.DEVELOPMENT


def load_env_file():
    """Load .env file."""
    if Path(".env").exists():
        load_dotenv(".env")


load_env_file()


class Settings(BaseSettings):
    """Tool settings.

    Logging, threading and linear-algebra thresholds. Every field can be
    overridden with an ``ODHALL_``-prefixed environment variable.
    """

    model_config = SettingsConfigDict(
        env_prefix="ODHALL_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    APP_ENV: Environment = Field(default_factory=get_environment)
    PROJECT_NAME: str = "odhall"
    VERSION: str = "0.3.0"

    # Logging Configuration
    LOG_DIR: Optional[Path] = None
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"

    # Numerics plumbing
    FFT_WORKERS: int = Field(default=1, ge=1)
    PROPAGATOR_COND_LIMIT: float = Field(default=1e12, gt=1.0)
    SHOW_PROGRESS: bool = True


settings = Settings()
