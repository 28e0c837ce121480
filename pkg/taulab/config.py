"""
Configuration management using Pydantic settings.
Loads numerical tolerances, truncation defaults and logging options from the environment.
"""

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime configuration loaded from TAULAB_* environment variables."""

    # Enclosure arithmetic
    slack: float = 1e-12  # Relative float pad per accumulation step (TAULAB_SLACK)
    weight_tolerance: float = 1e-12  # Weight-sum tolerance when building measures
    load_weight_tolerance: float = 1e-9  # Weight-sum tolerance when loading documents
    small_arg_threshold: float = 1e-4  # |2πt(hi-lo)| below this uses the Taylor branch

    # Truncation defaults
    default_depth: int = 40  # Trit depth D for sampling
    default_series_terms: int = 40  # Terms of the dyadic series d_a(2^m, 0)^2
    default_metric_truncation: int = 60  # N for d_a at general arguments
    min_product_truncation: int = 20  # Floor of the default N for the product formula
    product_target_eps: float = 1e-12  # Tail bound the default product truncation aims for

    # Searches and sweeps
    refine_attempts: int = 2  # Total attempts (initial + doublings) for undecided brackets
    max_workers: int = 1  # Thread pool size for sweeps; 1 runs sequentially
    decay_points_per_width: int = 64  # Decay profile grid step = 1 / (this * band width)
    decay_chunk_points: int = 1_000_000  # Grid points per char_fn call in decay profiles
    symbol_grid_points: int = 1001  # Default grid size for symbol checks and exports
    validate_budget_seconds: float = 60.0  # Budget reported by `taulab validate`

    # Application Configuration
    environment: str = "development"
    log_level: str = "INFO"

    class Config:
        env_prefix = "TAULAB_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
