"""
Configuration settings for the rotwave spectral toolkit
"""
from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Process settings loaded from environment variables (prefix ROTWAVE_)"""

    # Application Configuration
    app_name: str = "rotwave"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Sweep execution
    threads: Optional[int] = None
    output_dir: str = "results"
    deterministic_output: bool = False

    # Numerical guards
    blowup_factor: float = 1.10
    zero_defect_floor: float = 1e-14
    neumann_tolerance: float = 1e-8

    # Inequality report constants
    norm_check_constant: float = 2.0
    hls_constant: float = 10.0

    class Config:
        env_file = ".env"
        env_prefix = "ROTWAVE_"
        case_sensitive = False


# Global settings instance
settings = Settings()
