"""Validated configuration of one command-line run."""

from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config.settings import settings
from src.models.quantum_models import HalfInt, SystemParams
from src.models.result_models import CoefficientMethod, OutputFormat


class RunConfig(BaseModel):
    """Everything a subcommand needs, checked before any computation starts."""

    params: SystemParams = Field(default_factory=SystemParams)
    m: Optional[HalfInt] = None
    s: Optional[HalfInt] = None
    n: Optional[int] = Field(default=None, ge=0)
    n_max: Optional[int] = Field(default=None, ge=0)
    r_list: list[float] = Field(default_factory=lambda: [0.0, 0.1, 1.0, 10.0])
    methods: list[CoefficientMethod] = Field(
        default_factory=lambda: [CoefficientMethod.THREE_F2, CoefficientMethod.CG]
    )
    output_format: OutputFormat = Field(default_factory=lambda: OutputFormat(settings.output_format.lower()))
    output_path: Optional[str] = None
    tolerance: Optional[float] = Field(default=None, gt=0)
    suites: list[str] = Field(default_factory=lambda: ["all"])
    report_path: Optional[str] = None
    perturb_cg: float = 0.0

    @field_validator("m", "s", mode="before")
    @classmethod
    def _parse_half_int(cls, value):
        if value is None or isinstance(value, HalfInt):
            return value
        return HalfInt.of(value)

    @field_validator("r_list")
    @classmethod
    def _check_r_list(cls, value: list[float]) -> list[float]:
        if any(r < 0 for r in value):
            raise ValueError(f"Spheroidal couplings must be nonnegative, got {value}")
        return value

    @model_validator(mode="after")
    def _check_sector(self) -> "RunConfig":
        if (self.m is None) != (self.s is None):
            raise ValueError("m and s must be given together")
        if self.m is not None and not (self.m + self.s).is_integer():
            raise ValueError(f"m + s must be an integer (m={self.m}, s={self.s})")
        return self
