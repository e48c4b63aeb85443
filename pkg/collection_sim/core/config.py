from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process settings loaded from environment variables."""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Environment
    ENVIRONMENT: str = "development"  # "development" | "production" (JSON logs)
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Experiment defaults, overridable per run from the command line
    DEFAULT_PROFILE: str = "desk"  # "desk" | "paper"
    DEFAULT_WORKERS: int = 1


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
