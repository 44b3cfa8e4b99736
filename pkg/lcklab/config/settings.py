from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "LCK Lab"
    VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Reports
    OUTPUT_DIR: str = "./reports"
    REPORT_SCHEMA_VERSION: str = "1.0"

    # Sampling
    DEFAULT_SEED: int = 20240611
    DEFAULT_SAMPLES: int = 200
    RADIUS_MIN: float = 0.1
    RADIUS_MAX: float = 10.0

    # Quadrature
    DEFAULT_QUADRATURE_N: int = 256
    MIN_QUADRATURE_N: int = 4

    # Tolerances
    TOL_JET: float = 1e-8
    TOL_QUAD: float = 1e-6
    TOL_EXACT: float = 1e-10
    POSITIVITY_THRESHOLD: float = 1e-10
    TOL_VAISMAN: float = 1e-6

    # Averaging pipeline (nested quadrature, kept small)
    PIPELINE_SAMPLES: int = 16
    PIPELINE_QUADRATURE_N: int = 64

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="LCKLAB_",
        case_sensitive=True,
        extra="ignore",
    )


# Create settings instance
settings = Settings()
