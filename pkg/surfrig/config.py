"""Runtime settings for surfrig.

Provides a process-wide settings object holding the sampling and
trial defaults. Values come from the model defaults, then from
``SURFRIG_*`` environment variables; command-line flags override both
per invocation.
"""

import os
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator

ENV_PREFIX = "SURFRIG_"


class Settings(BaseModel):
    """Tunable defaults for sampling, rank tests and batch runs."""

    analyze_trials: int = Field(default=3, ge=1)
    type_trials: int = Field(default=5, ge=1)
    type_sizes: tuple[int, ...] = (4, 5, 6)
    sample_height: int = Field(default=10**6, ge=1)
    float_tolerance: float | None = Field(default=None, gt=0)
    max_resamples: int = Field(default=1000, ge=1)
    bruteforce_limit: int = Field(default=14, ge=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1)
    log_level: str = "WARNING"

    @field_validator("type_sizes", mode="before")
    @classmethod
    def _split_sizes(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(int(part) for part in value.split(",") if part)
        return value

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> "Settings":
        """Build settings from ``SURFRIG_*`` variables.

        Args:
            environ: Mapping to read instead of ``os.environ``.

        Returns:
            The validated settings.

        Raises:
            ValueError: If a variable holds an invalid value.
        """
        environ = os.environ if environ is None else environ
        overrides = {
            name: environ[ENV_PREFIX + name.upper()]
            for name in cls.model_fields
            if ENV_PREFIX + name.upper() in environ
        }
        try:
            return cls.model_validate(overrides)
        except ValidationError as e:
            names = ", ".join(
                ENV_PREFIX + str(err["loc"][0]).upper() for err in e.errors()
            )
            raise ValueError(f"Invalid settings in {names}") from e


_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the settings singleton, loading it on first use.

    Returns:
        The process-wide Settings instance.
    """
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings. Useful for testing."""
    global _settings
    _settings = None
