"""Pydantic models for points of R^4 in the supported coordinate systems."""

import math

from pydantic import BaseModel, ConfigDict, Field

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


class Point4(BaseModel):
    """Cartesian point (u0, u1, u2, u3)."""

    model_config = ConfigDict(frozen=True)

    u0: float
    u1: float
    u2: float
    u3: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.u0, self.u1, self.u2, self.u3)

    @property
    def norm_squared(self) -> float:
        return math.fsum(c * c for c in self.as_tuple())


class EulerCoords(BaseModel):
    """Radius u and SU(2) Euler angles (alpha, beta, gamma)."""

    model_config = ConfigDict(frozen=True)

    u: float = Field(ge=0)
    alpha: float = Field(ge=0, lt=TWO_PI)
    beta: float = Field(ge=0, le=math.pi)
    gamma: float = Field(ge=0, lt=FOUR_PI)


class DoublePolarCoords(BaseModel):
    """Two independent polar pairs (rho1, phi1), (rho2, phi2)."""

    model_config = ConfigDict(frozen=True)

    rho1: float = Field(ge=0)
    rho2: float = Field(ge=0)
    phi1: float = Field(ge=0, lt=TWO_PI)
    phi2: float = Field(ge=0, lt=TWO_PI)


class SpheroidalCoords(BaseModel):
    """Prolate spheroidal coordinates (xi, eta, alpha, gamma) with interfocus distance d."""

    model_config = ConfigDict(frozen=True)

    xi: float = Field(ge=1)
    eta: float = Field(ge=-1, le=1)
    alpha: float = Field(ge=0, lt=TWO_PI)
    gamma: float = Field(ge=0, lt=FOUR_PI)
    d: float = Field(gt=0)


class KSImage(BaseModel):
    """Image (x, y, z, gamma) of a point under the Kustaanheimo-Stiefel map."""

    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    z: float
    gamma: float
