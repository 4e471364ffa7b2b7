"""
Toolkit configuration using Pydantic Settings.

Centralizes numeric budgets, worker caps and logging options with
environment variable and .env support.
"""
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app import __version__


class Settings(BaseSettings):
    """
    Toolkit settings with environment variable support.

    Every field can be overridden from the environment (e.g. PPC_THREADS=8)
    or from a .env file next to the working directory.
    """

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Identity echoed into every report
    TOOL_NAME: str = "ppc-toolkit"
    TOOL_VERSION: str = __version__

    # Logging
    LOG_LEVEL: str = "INFO"  # DEBUG/INFO/WARNING/ERROR
    LOG_FORMAT: str = "console"  # console | json

    # Concurrency - caps worker threads for chunked numeric work
    PPC_THREADS: int = Field(default=4, ge=1)

    # Kernel constants
    MULTIPLIER_C2: float = Field(default=0.5, gt=0.0, lt=1.0)
    WEAK_C_ALPHA: float = Field(default=1.0, gt=0.0)

    # Oracle scale limits
    PARSEVAL_MAX_POINTS: int = 5000
    PARSEVAL_MAX_LATTICE: int = 200_000  # lattice vectors in one truncated Parseval sum
    DISCREPANCY_MAX_CELLS: int = 20_000_000  # anchored grid cells, (m+1)^d

    # Memory budgets (float64 elements per chunk)
    PAIR_BLOCK_ELEMENTS: int = 4_000_000
    SPECTRUM_BLOCK_ELEMENTS: int = 4_000_000

    @field_validator("LOG_LEVEL")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @field_validator("LOG_FORMAT")
    @classmethod
    def _known_format(cls, value: str) -> str:
        value = value.lower()
        if value not in ("console", "json"):
            raise ValueError("LOG_FORMAT must be 'console' or 'json'")
        return value

    @property
    def tool_banner(self) -> str:
        """Name and version as printed by the `version` subcommand."""
        return f"{self.TOOL_NAME} {self.TOOL_VERSION}"


settings = Settings()
