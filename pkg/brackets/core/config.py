from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="BRACKETS_", extra="ignore")

    # Default directory for relative --out prefixes.
    OUTPUT_DIR: str = "."
    LOG_LEVEL: str = "WARNING"

    # Shot generation. Results never depend on WORKERS, only on the seed.
    WORKERS: int = 1
    SHOT_CHUNK: int = 8192

    # Gauss-Legendre rule for the psi integrals.
    QUAD_MIN_NODES: int = 32
    QUAD_MAX_NODES: int = 4096
    QUAD_RTOL: float = 1e-10

    # Photon-number truncation: P(m) < PHOTON_TAIL beyond the cutoff.
    PHOTON_TAIL: float = 1e-7

    # Fringe analysis.
    SMOOTHING_WINDOW: int = 5
    # Smoothed |v| a turning point must reach to count as a fringe extremum.
    EXTREMUM_LEVEL: float = 0.5
    FRINGE_PHASE_DEGREE: int = 5

    CSV_DIGITS: int = 12


settings = Settings()
