from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Application settings using Pydantic BaseSettings."""

    # Environment
    environment: str = "development"

    # App settings
    app_name: str = "engel-check"
    app_version: str = "1.0.0"
    log_level: Optional[str] = None

    # File storage
    reports_dir: str = "Reports"

    # Group construction limits
    order_cap: int = 20000
    corpus_order_cap: int = 512
    associativity_exhaustive_limit: int = 512
    associativity_sample_triples: int = 100000

    # Quantifier caps for claim checks
    pair_exhaustive_limit: int = 256
    pair_sample_count: int = 10000
    triple_sample_count: int = 20000
    random_seed: int = 20240101

    # Worker processes for check-all
    jobs: int = 1

    # Symbolic saturation
    theorem2_instance_cap: int = 4096

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "env_prefix": "ENGEL_"}


settings = Settings()
