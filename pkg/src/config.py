"""
Runtime configuration.

Values come from the environment (prefix ``TSN_``) or from a ``.env`` file at
the working directory; CLI flags override them per run.
"""

import os
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings shared by the library and the CLI."""

    model_config = SettingsConfigDict(env_prefix="TSN_", env_file=".env", extra="ignore")

    cache_dir: Path = Field(default=Path("./cache"), description="EvalTable cache and job checkpoints")
    log_dir: Path = Field(default=Path("./logs"), description="JSON-Lines run journal")

    max_exhaustive_points: int = Field(
        default=1 << 25,
        ge=1,
        description="Largest point space scanned exhaustively",
    )
    random_trials: int = Field(default=200_000, ge=1, description="Points sampled in randomized mode")
    seed: int = Field(default=0, description="Default PRNG seed")

    jobs: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Worker processes (default: available cores)",
    )
    census_max_n: int = Field(default=7, ge=1, description="Largest n censused without extended=True")
    all_systems_limit: int = Field(default=200_000, ge=1, description="Cap on path tuples built by the all-systems oracle")
    chunk_size: int = Field(default=1 << 18, ge=8, description="Points per numpy block (multiple of 8)")
    checkpoint_every: int = Field(default=1, ge=1, description="Top-level branches between checkpoints")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get or create the settings singleton"""
    return Settings()
