# Application settings and configuration
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Simulator and decoder settings"""

    # Logging
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Architecture model
    CLOCK_MHZ: float = 500.0
    DEFAULT_AB: int = 3

    # Monte Carlo stopping rule
    MIN_FRAME_ERRORS: int = 100
    MAX_FRAMES: int = 10_000_000

    # Parallel execution
    BLOCK_FRAMES: int = 2000  # frames per RNG substream
    WORKERS: int = 1
    SEED: int = 2021

    # Default SNR grid (dB)
    SNR_START: float = 4.0
    SNR_STEP: float = 0.5
    SNR_STOP: float = 12.0

    # Code construction cache
    CODE_CACHE_SIZE: int = 32

    model_config = SettingsConfigDict(env_file=".env", env_prefix="GRANDAB_", extra="ignore")


settings = Settings()
