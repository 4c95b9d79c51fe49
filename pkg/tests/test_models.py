"""Unit tests for the pydantic models."""

from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from src.models.coordinate_models import EulerCoords, Point4, SpheroidalCoords
from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SectorParams, SystemParams
from src.models.result_models import (
    CheckResult,
    QuadratureKind,
    QuadratureRule,
    SpheroidalSolution,
    SymTriMatrix,
    VerificationReport,
)
from src.models.run_config import RunConfig
from src.services.oscillator import sector


class TestHalfInt:
    """Test exact integer and half-integer quantum numbers."""

    def test_parse(self):
        """Test construction from ints, strings and fractions."""
        assert HalfInt.of(2).twice_value == 4
        assert HalfInt.of("3/2").twice_value == 3
        assert HalfInt.of("-1/2").twice_value == -1
        assert HalfInt.of(Fraction(5, 2)).value == 2.5

    def test_rejects_floats(self):
        """Test floats and decimal strings are refused."""
        with pytest.raises(ValueError):
            HalfInt.of(0.5)
        with pytest.raises(ValueError):
            HalfInt.of("0.5")
        with pytest.raises(ValueError):
            HalfInt.of(True)

    def test_rejects_thirds(self):
        """Test non half-integer rationals."""
        with pytest.raises(ValueError):
            HalfInt.of("1/3")
        with pytest.raises(ValueError):
            HalfInt.of("abc")

    def test_arithmetic_and_order(self):
        """Test arithmetic, comparisons and formatting."""
        half = HalfInt.of("1/2")
        assert half + half == 1
        assert (half + 1).value == 1.5
        assert (1 - half) == half
        assert -half < half
        assert abs(-half) == half
        assert str(HalfInt.of("3/2")) == "3/2"
        assert str(HalfInt.of(-2)) == "-2"
        assert max(HalfInt.of(1), HalfInt.of("3/2")) == HalfInt.of("3/2")
        assert hash(HalfInt.of(1)) == hash(HalfInt.of("2/2"))


class TestQuantumModels:
    """Test physical parameters and quantum-number records."""

    def test_system_params(self):
        """Test the oscillator scale and dimensionless coupling."""
        params = SystemParams(mu=2.0, omega=8.0, hbar=4.0, c1=1.5)
        assert params.a == pytest.approx(2.0)
        assert params.coupling(params.c1) == pytest.approx(2.0 * 2.0 * 1.5 / 16.0)

    def test_system_params_validation(self):
        """Test positivity constraints."""
        with pytest.raises(ValidationError):
            SystemParams(mu=0.0)
        with pytest.raises(ValidationError):
            SystemParams(c1=-1.0)

    def test_euler_qn_admissible(self):
        """Test admissible and inadmissible Eulerian labels."""
        state = EulerQN(N=3, j=HalfInt.of("3/2"), m=HalfInt.of("1/2"), s=HalfInt.of("1/2"))
        assert state.N == 3
        with pytest.raises(ValidationError):
            EulerQN(N=2, j=HalfInt.of(2), m=HalfInt.of(0), s=HalfInt.of(0))
        with pytest.raises(ValidationError):
            EulerQN(N=2, j=HalfInt.of(0), m=HalfInt.of(1), s=HalfInt.of(0))
        with pytest.raises(ValidationError):
            EulerQN(N=2, j=HalfInt.of(1), m=HalfInt.of("1/2"), s=HalfInt.of(0))

    def test_polar_qn_level(self):
        """Test N = 2 N1 + 2 N2 + |M1| + |M2|."""
        assert PolarQN(N1=1, N2=2, M1=-1, M2=3).N == 10

    def test_sector_label(self):
        """Test the sector label names its charges."""
        sec = sector(SystemParams(c1=0.5), "1/2", "-1/2")
        assert sec.label().startswith("m=1/2,s=-1/2")
        assert sec.m_plus_half == HalfInt.of("1/2")

    def test_sector_params_consistent(self):
        """Test a sector rebuilt from its own fields validates."""
        sec = sector(SystemParams(c1=0.5, c2=2.0), "1/2", "-3/2")
        assert SectorParams(**sec.model_dump()) == sec

    def test_sector_params_mismatch(self):
        """Test derived fields that disagree with the charges are refused."""
        sec = sector(SystemParams(c1=0.5, c2=2.0), "1", "0")
        fields = sec.model_dump()
        with pytest.raises(ValidationError):
            SectorParams(**{**fields, "M1": sec.M1 + 1})
        with pytest.raises(ValidationError):
            SectorParams(**{**fields, "m1": sec.m1 + 0.25})
        with pytest.raises(ValidationError):
            SectorParams(**{**fields, "m_minus": -sec.m_minus - 1.0})
        with pytest.raises(ValidationError):
            SectorParams(**{**fields, "s": HalfInt.of("1/2")})


class TestCoordinateModels:
    """Test coordinate ranges."""

    def test_point_norm(self):
        """Test the squared norm."""
        assert Point4(u0=1.0, u1=2.0, u2=2.0, u3=4.0).norm_squared == 25.0

    def test_euler_ranges(self):
        """Test the Euler angle ranges."""
        EulerCoords(u=1.0, alpha=0.0, beta=np.pi, gamma=12.5)
        with pytest.raises(ValidationError):
            EulerCoords(u=1.0, alpha=7.0, beta=0.0, gamma=0.0)
        with pytest.raises(ValidationError):
            EulerCoords(u=-1.0, alpha=0.0, beta=0.0, gamma=0.0)

    def test_spheroidal_ranges(self):
        """Test xi >= 1 and |eta| <= 1."""
        with pytest.raises(ValidationError):
            SpheroidalCoords(xi=0.5, eta=0.0, alpha=0.0, gamma=0.0, d=1.0)
        with pytest.raises(ValidationError):
            SpheroidalCoords(xi=2.0, eta=1.5, alpha=0.0, gamma=0.0, d=1.0)


class TestResultModels:
    """Test result containers."""

    def test_symtri_roundtrip(self):
        """Test dense conversion of a tridiagonal matrix."""
        T = SymTriMatrix(diag=(1.0, 2.0, 3.0), offdiag=(0.5, -0.5))
        dense = T.to_dense()
        assert T.size == 3
        assert dense[0, 1] == dense[1, 0] == 0.5
        assert SymTriMatrix.from_dense(dense) == T

    def test_symtri_band_lengths(self):
        """Test mismatched bands are refused."""
        with pytest.raises(ValidationError):
            SymTriMatrix(diag=(1.0, 2.0), offdiag=())
        with pytest.raises(ValidationError):
            SymTriMatrix(diag=())

    def test_quadrature_rule_lengths(self):
        """Test nodes and weights must match the order."""
        with pytest.raises(ValidationError):
            QuadratureRule(kind=QuadratureKind.LEGENDRE, order=2, nodes=(0.0,), weights=(2.0,))

    def test_spheroidal_solution_distance(self):
        """Test d is recovered from R."""
        sec = sector(SystemParams(), 0, 0)
        solution = SpheroidalSolution(N=0, sector=sec, R=4.0)
        assert solution.interfocus_distance(a=2.0) == pytest.approx(2.0)
        assert solution.dimension == 0

    def test_verification_report(self):
        """Test pass/fail bookkeeping."""
        report = VerificationReport(
            schema_version="1",
            checks=[
                CheckResult(name="a", measured=0.0, bound=1.0, passed=True),
                CheckResult(name="b", measured=2.0, bound=1.0, passed=False),
            ],
        )
        assert not report.passed
        assert report.failed_checks() == ["b"]


class TestRunConfig:
    """Test command-line configuration validation."""

    def test_parses_charges(self):
        """Test exact string charges."""
        config = RunConfig(m="1/2", s="-1/2", n=3)
        assert config.m == HalfInt.of("1/2")

    def test_charges_together(self):
        """Test m without s is refused."""
        with pytest.raises(ValidationError):
            RunConfig(m="0")

    def test_sector_parity(self):
        """Test m + s must be an integer."""
        with pytest.raises(ValidationError):
            RunConfig(m="1/2", s="0")

    def test_negative_r(self):
        """Test spheroidal couplings must be nonnegative."""
        with pytest.raises(ValidationError):
            RunConfig(r_list=[0.0, -1.0])
