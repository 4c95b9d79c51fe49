"""Pydantic models for computed tables, quadrature rules and verification reports."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.quantum_models import EulerQN, PolarQN, SectorParams


class CoefficientMethod(str, Enum):
    """Backend used to build an interbasis coefficient table."""

    THREE_F2 = "3f2"
    CG = "cg"
    QUADRATURE = "quad"


class MatrixMethod(str, Enum):
    """Source of an operator matrix in a non-diagonal basis."""

    CLOSED_FORM = "closed_form"
    DERIVED = "derived"
    ORACLE = "oracle"


class Basis(str, Enum):
    """Basis in which an operator matrix is expressed."""

    EULER = "euler"
    POLAR = "polar"


class OperatorKind(str, Enum):
    """Integral of motion."""

    LAMBDA = "lambda"
    OMEGA = "omega"


class RecursionSource(str, Enum):
    """Coefficient set used when checking the three-term recursions."""

    PRINTED = "printed"
    ORACLE_CONSISTENT = "oracle_consistent"


class QuadratureKind(str, Enum):
    """Classical Gaussian quadrature families."""

    LEGENDRE = "legendre"
    LAGUERRE = "laguerre"
    JACOBI = "jacobi"


class NormalizationKind(str, Enum):
    """Factor of a separable wavefunction whose constant is fixed numerically."""

    RADIAL = "radial"
    POLAR = "polar"
    ANGULAR = "angular"


class OutputFormat(str, Enum):
    """Serialization format of CLI artifacts."""

    CSV = "csv"
    JSON = "json"


class CoefficientTable(BaseModel):
    """Orthogonal matrix W[N1][j] linking double polar rows to Eulerian columns."""

    N: int
    sector: SectorParams
    method: CoefficientMethod
    rows: list[PolarQN] = Field(default_factory=list)
    cols: list[EulerQN] = Field(default_factory=list)
    values: list[list[float]] = Field(default_factory=list)

    @property
    def matrix(self) -> np.ndarray:
        """Values as a (rows x cols) array."""
        return np.array(self.values, dtype=float).reshape(len(self.rows), len(self.cols))

    @property
    def dimension(self) -> int:
        return len(self.rows)


class SpheroidalSolution(BaseModel):
    """Spectrum of Q = Lambda + R * Omega on one multiplet with its expansion vectors."""

    N: int
    sector: SectorParams
    R: float = Field(ge=0)
    j_values: list[float] = Field(default_factory=list)
    n1_values: list[int] = Field(default_factory=list)
    q_values: list[float] = Field(default_factory=list)
    U: list[list[float]] = Field(default_factory=list)
    V: list[list[float]] = Field(default_factory=list)

    @property
    def U_matrix(self) -> np.ndarray:
        """Rows are eigenvectors over the Eulerian index j."""
        return np.array(self.U, dtype=float).reshape(len(self.q_values), len(self.j_values))

    @property
    def V_matrix(self) -> np.ndarray:
        """Rows are eigenvectors over the double polar index N1."""
        return np.array(self.V, dtype=float).reshape(len(self.q_values), len(self.n1_values))

    @property
    def dimension(self) -> int:
        return len(self.q_values)

    def interfocus_distance(self, a: float) -> float:
        """Recover d from R = a^2 d^2 / 4."""
        return 2.0 * float(np.sqrt(self.R)) / a


class QuadratureRule(BaseModel):
    """Gaussian quadrature nodes and weights for a classical weight function."""

    model_config = ConfigDict(frozen=True)

    kind: QuadratureKind
    order: int = Field(ge=1)
    alpha: float = 0.0
    beta: float = 0.0
    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    @model_validator(mode="after")
    def _check_lengths(self) -> "QuadratureRule":
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ValueError("nodes and weights must both have length equal to order")
        return self

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights as numpy arrays."""
        return np.asarray(self.nodes), np.asarray(self.weights)


class SymTriMatrix(BaseModel):
    """Real symmetric tridiagonal matrix stored by its two bands."""

    model_config = ConfigDict(frozen=True)

    diag: tuple[float, ...]
    offdiag: tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_bands(self) -> "SymTriMatrix":
        if len(self.diag) == 0:
            raise ValueError("diag must not be empty")
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError(
                f"offdiag must have length {len(self.diag) - 1}, got {len(self.offdiag)}"
            )
        return self

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "SymTriMatrix":
        """Take the main and first upper band of a square matrix."""
        matrix = np.asarray(matrix, dtype=float)
        return cls(
            diag=tuple(float(x) for x in np.diag(matrix)),
            offdiag=tuple(float(x) for x in np.diag(matrix, 1)),
        )

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


class OverlapResult(BaseModel):
    """Quadrature value with the last change seen by the convergence protocol."""

    value: float
    delta: float
    nodes: int


class ResidualReport(BaseModel):
    """Per-eigenvector residuals of the U and V three-term recursions."""

    N: int
    R: float
    source: RecursionSource
    u_residuals: list[Optional[float]] = Field(default_factory=list)
    v_residuals: list[Optional[float]] = Field(default_factory=list)

    @property
    def max_residual(self) -> Optional[float]:
        values = [r for r in self.u_residuals + self.v_residuals if r is not None]
        return max(values) if values else 0.0


class CheckResult(BaseModel):
    """Outcome of one named verification check."""

    name: str
    measured: Optional[float]
    bound: Optional[float]
    passed: bool
    detail: str = ""


class VerificationReport(BaseModel):
    """Machine-readable result of a verification run."""

    schema_version: str
    suites: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]


class LedgerEntry(BaseModel):
    """Deviation of one printed formula from its corrected counterpart."""

    item: str
    measured: Optional[float]
    expected: Optional[float] = None
    undefined: int = 0
    detail: str = ""
