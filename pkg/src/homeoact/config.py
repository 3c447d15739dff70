from __future__ import annotations

from typing import Literal
import logging

import pydantic
import pydantic_settings

from homeoact import const

log = logging.getLogger(__name__)


class Settings(pydantic_settings.BaseSettings):
    """Tunables read from HOMEOACT_* environment variables, or a .env file next to the caller."""

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    generator_budget: int = pydantic.Field(default=4, ge=2, le=16)
    bisection_exponent: int = pydantic.Field(default=20, ge=4, le=64)
    probe_grid: int = pydantic.Field(default=64, ge=4)
    grid: int = pydantic.Field(default=20, ge=2)

    model_config = pydantic_settings.SettingsConfigDict(
        env_prefix=const.ENV_PREFIX,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    @classmethod
    def from_env(cls, *, dotenv_path: str | None = None) -> Settings:
        """Read the environment, with `dotenv_path` in place of ./.env when given."""
        settings = cls() if dotenv_path is None else cls(_env_file=dotenv_path)  # type: ignore[call-arg]
        log.debug(f"Settings: {settings.model_dump()}")
        return settings
