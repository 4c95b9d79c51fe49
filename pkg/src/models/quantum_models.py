"""Pydantic models for physical parameters and quantum-number records."""

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


@total_ordering
class HalfInt(BaseModel):
    """Exact integer or half-integer, stored as twice its value."""

    model_config = ConfigDict(frozen=True)

    twice_value: int

    @classmethod
    def of(cls, value: Union["HalfInt", int, str, Fraction]) -> "HalfInt":
        """
        Build a HalfInt from an int, an exact string such as "3/2", or a Fraction.

        Floats are rejected: quantum numbers are always carried exactly.

        Raises:
            ValueError: If the value is not an integer or half-integer
        """
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool) or isinstance(value, float):
            raise ValueError(f"Quantum numbers must be exact, got float-like {value!r}")
        if isinstance(value, int):
            return cls(twice_value=2 * value)
        if isinstance(value, str):
            text = value.strip()
            if "." in text or "e" in text.lower():
                raise ValueError(f"Quantum numbers must be written as p or p/2, got {value!r}")
            try:
                value = Fraction(text)
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"Cannot parse quantum number {value!r}") from e
        if isinstance(value, Fraction):
            doubled = 2 * value
            if doubled.denominator != 1:
                raise ValueError(f"{value} is not an integer or half-integer")
            return cls(twice_value=int(doubled))
        raise ValueError(f"Unsupported quantum number type: {type(value).__name__}")

    @property
    def value(self) -> float:
        """Real value."""
        return self.twice_value / 2

    def is_integer(self) -> bool:
        """True when the represented value is an integer."""
        return self.twice_value % 2 == 0

    def __float__(self) -> float:
        return self.value

    def __add__(self, other: Union["HalfInt", int]) -> "HalfInt":
        return HalfInt(twice_value=self.twice_value + _twice(other))

    __radd__ = __add__

    def __sub__(self, other: Union["HalfInt", int]) -> "HalfInt":
        return HalfInt(twice_value=self.twice_value - _twice(other))

    def __rsub__(self, other: Union["HalfInt", int]) -> "HalfInt":
        return HalfInt(twice_value=_twice(other) - self.twice_value)

    def __neg__(self) -> "HalfInt":
        return HalfInt(twice_value=-self.twice_value)

    def __abs__(self) -> "HalfInt":
        return HalfInt(twice_value=abs(self.twice_value))

    def __lt__(self, other: Union["HalfInt", int]) -> bool:
        return self.twice_value < _twice(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (HalfInt, int)) and not isinstance(other, bool):
            return self.twice_value == _twice(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.twice_value)

    def __str__(self) -> str:
        if self.is_integer():
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def _twice(other: Union[HalfInt, int]) -> int:
    if isinstance(other, HalfInt):
        return other.twice_value
    if isinstance(other, int):
        return 2 * other
    raise TypeError(f"Cannot combine HalfInt with {type(other).__name__}")


class SystemParams(BaseModel):
    """Physical constants of the oscillator; defaults are the unit system mu = omega = hbar = 1."""

    model_config = ConfigDict(frozen=True)

    mu: float = Field(default=1.0, gt=0)
    omega: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)
    c1: float = Field(default=0.0, ge=0)
    c2: float = Field(default=0.0, ge=0)

    @property
    def a(self) -> float:
        """Inverse oscillator length sqrt(mu * omega / hbar)."""
        return math.sqrt(self.mu * self.omega / self.hbar)

    def coupling(self, c: float) -> float:
        """Dimensionless singular strength 2 mu c / hbar^2."""
        return 2.0 * self.mu * c / self.hbar**2


class SectorParams(BaseModel):
    """Conserved charges (m, s) and the singularity shifts they induce."""

    model_config = ConfigDict(frozen=True)

    m: HalfInt
    s: HalfInt
    M1: int
    M2: int
    delta1: float = Field(ge=0)
    delta2: float = Field(ge=0)
    m1: float
    m2: float
    m_plus: float
    m_minus: float

    @model_validator(mode="after")
    def _check_derived(self) -> "SectorParams":
        if not (self.m + self.s).is_integer():
            raise ValueError(f"m + s must be an integer (m={self.m}, s={self.s})")
        if self.m + self.s != self.M1 or self.m - self.s != self.M2:
            raise ValueError(f"M1, M2 = {self.M1}, {self.M2} do not match m + s, m - s for m={self.m}, s={self.s}")
        expected = {
            "m1": abs(self.M1) + self.delta1,
            "m2": abs(self.M2) + self.delta2,
            "m_plus": (abs(self.M1) + abs(self.M2)) / 2.0,
            "m_minus": (abs(self.M1) - abs(self.M2)) / 2.0,
        }
        for name, value in expected.items():
            if not math.isclose(getattr(self, name), value, rel_tol=1e-12, abs_tol=1e-12):
                raise ValueError(f"{name}={getattr(self, name)} inconsistent with the charges (expected {value})")
        return self

    @property
    def delta(self) -> float:
        """Total shift delta1 + delta2."""
        return self.delta1 + self.delta2

    @property
    def m_plus_half(self) -> HalfInt:
        """Exact m_plus = max(|m|, |s|), the lowest admissible j."""
        return max(abs(self.m), abs(self.s))

    def label(self) -> str:
        """Short human-readable sector label."""
        return f"m={self.m},s={self.s},d1={self.delta1:.6g},d2={self.delta2:.6g}"


class EulerQN(BaseModel):
    """Eulerian quantum numbers (N, j, m, s)."""

    model_config = ConfigDict(frozen=True)

    N: int = Field(ge=0)
    j: HalfInt
    m: HalfInt
    s: HalfInt

    @model_validator(mode="after")
    def _check_admissible(self) -> "EulerQN":
        m_plus = max(abs(self.m), abs(self.s))
        if not (self.m + self.s).is_integer():
            raise ValueError(f"m + s must be an integer (m={self.m}, s={self.s})")
        gap = self.j - m_plus
        if gap < 0 or not gap.is_integer():
            raise ValueError(f"j - m_plus must be a nonnegative integer (j={self.j}, m_plus={m_plus})")
        top = HalfInt(twice_value=self.N) - self.j
        if top < 0 or not top.is_integer():
            raise ValueError(f"N/2 - j must be a nonnegative integer (N={self.N}, j={self.j})")
        return self


class PolarQN(BaseModel):
    """Double polar quantum numbers (N1, N2, M1, M2)."""

    model_config = ConfigDict(frozen=True)

    N1: int = Field(ge=0)
    N2: int = Field(ge=0)
    M1: int
    M2: int

    @property
    def N(self) -> int:
        """Principal quantum number 2 N1 + 2 N2 + |M1| + |M2|."""
        return 2 * self.N1 + 2 * self.N2 + abs(self.M1) + abs(self.M2)
