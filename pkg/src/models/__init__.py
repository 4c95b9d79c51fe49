"""Data models module."""

from src.models.coordinate_models import (
    DoublePolarCoords,
    EulerCoords,
    KSImage,
    Point4,
    SpheroidalCoords,
)
from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SectorParams, SystemParams
from src.models.result_models import (
    Basis,
    CheckResult,
    CoefficientMethod,
    CoefficientTable,
    LedgerEntry,
    MatrixMethod,
    NormalizationKind,
    OperatorKind,
    OutputFormat,
    OverlapResult,
    QuadratureKind,
    QuadratureRule,
    RecursionSource,
    ResidualReport,
    SpheroidalSolution,
    SymTriMatrix,
    VerificationReport,
)
from src.models.run_config import RunConfig

__all__ = [
    "HalfInt",
    "SystemParams",
    "SectorParams",
    "EulerQN",
    "PolarQN",
    "Point4",
    "EulerCoords",
    "DoublePolarCoords",
    "SpheroidalCoords",
    "KSImage",
    "CoefficientMethod",
    "CoefficientTable",
    "MatrixMethod",
    "Basis",
    "OperatorKind",
    "RecursionSource",
    "QuadratureKind",
    "QuadratureRule",
    "NormalizationKind",
    "OutputFormat",
    "OverlapResult",
    "ResidualReport",
    "SpheroidalSolution",
    "SymTriMatrix",
    "CheckResult",
    "LedgerEntry",
    "VerificationReport",
    "RunConfig",
]
