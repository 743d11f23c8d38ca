"""Configuration management for debias-ate."""
import os
from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="DEBIAS_",
        case_sensitive=True,
        extra="ignore",
    )

    # Paths
    OUTPUT_DIR: str = "./data/output"
    DATABASE_PATH: str = "./data/runs.db"
    RECORD_RUNS: bool = True

    # Numerics
    REL_TOL: float = 1e-10
    PSEUDO_INVERSE: bool = False  # spectral-cutoff generalized inverse instead of failing
    CONFIDENCE_LEVEL: float = 0.95

    # Randomization engine
    BUDGET: int = 10_000_000  # largest space exact mode will enumerate
    THREADS: int = 0  # 0 = available parallelism
    CHUNK_SIZE: int = 4096
    MC_REPS: int = 100_000
    SEED: int = 20240101

    # Inference defaults
    DEFAULT_FLAVORS: str = "bc-hc2"
    DEFAULT_CI: str = "satterthwaite"
    T_DF: str = "units"  # Student-t df: "units" (n - 1) or "residual" (n - rank(X))

    # System
    LOG_LEVEL: str = "INFO"


def get_settings() -> Settings:
    """Get application settings."""
    return Settings()


def worker_count(threads: int = None) -> int:
    """Resolve a thread setting to a concrete worker count."""
    threads = settings.THREADS if threads is None else threads
    if threads and threads > 0:
        return threads
    return os.cpu_count() or 1


def ensure_directories():
    """Ensure required directories exist."""
    Path(settings.OUTPUT_DIR).mkdir(parents=True, exist_ok=True)
    Path(settings.DATABASE_PATH).parent.mkdir(parents=True, exist_ok=True)


# Global settings instance
settings = get_settings()
