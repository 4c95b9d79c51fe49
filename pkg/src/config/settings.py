"""Application configuration and settings."""

import logging

from pydantic import ConfigDict, Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Numerical and output configuration from environment variables."""

    model_config = ConfigDict(env_file=".env", case_sensitive=False)

    # Quadrature convergence protocol
    quad_start_nodes: int = Field(default=64, alias="QUAD_START_NODES")
    quad_max_nodes: int = Field(default=1024, alias="QUAD_MAX_NODES")
    quad_tolerance: float = Field(default=1e-10, alias="QUAD_TOLERANCE")

    # Verification bounds
    exact_tolerance: float = Field(default=1e-10, alias="EXACT_TOLERANCE")
    oracle_tolerance: float = Field(default=1e-8, alias="ORACLE_TOLERANCE")
    degeneracy_tolerance: float = Field(default=1e-10, alias="DEGENERACY_TOLERANCE")
    verify_seed: int = Field(default=20240601, alias="VERIFY_SEED")

    # Output
    output_format: str = Field(default="csv", alias="OUTPUT_FORMAT")
    float_format: str = Field(default="%.15e", alias="FLOAT_FORMAT")
    schema_version: str = Field(default="1", alias="SCHEMA_VERSION")

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    def setup_logging(self) -> None:
        """Configure logging."""
        logging.basicConfig(
            level=getattr(logging, self.log_level.upper()),
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )


# Global settings instance
try:
    settings = Settings()  # type: ignore
except Exception:
    # Fallback if .env holds values that fail validation
    settings = Settings.model_construct()
