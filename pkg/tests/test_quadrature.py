"""Unit tests for Gaussian rules, tridiagonal eigenproblems and numerical normalization."""

import math

import numpy as np
import pytest
from scipy import special

from src.config.settings import settings
from src.models.quantum_models import HalfInt, SystemParams
from src.models.result_models import NormalizationKind, QuadratureKind, SymTriMatrix
from src.services.oscillator import sector
from src.services.quadrature import (
    ConvergenceError,
    angular_constant,
    converge,
    golub_welsch,
    normalize_numeric,
    polar_constant,
    radial_constant,
    sturm_count,
    symtri_eigen,
)
from src.services.specfun import DomainError


class TestGolubWelsch:
    """Test Gaussian rules against scipy."""

    def test_legendre(self):
        """Test Gauss-Legendre nodes and weights."""
        x, w = golub_welsch(QuadratureKind.LEGENDRE, 12).arrays()
        ref_x, ref_w = np.polynomial.legendre.leggauss(12)
        assert np.allclose(x, ref_x, atol=1e-14)
        assert np.allclose(w, ref_w, atol=1e-14)

    def test_laguerre(self):
        """Test generalized Gauss-Laguerre rules."""
        for alpha in (0.0, 1.5, 4.2):
            x, w = golub_welsch(QuadratureKind.LAGUERRE, 10, alpha).arrays()
            ref_x, ref_w = special.roots_genlaguerre(10, alpha)
            assert np.allclose(x, ref_x, rtol=1e-12)
            assert np.allclose(w, ref_w, rtol=1e-8, atol=0)

    def test_jacobi(self):
        """Test Gauss-Jacobi rules with weight (1 - t)^alpha (1 + t)^beta."""
        for alpha, beta in ((0.0, 0.0), (1.3, 0.2), (3.0, 2.5)):
            x, w = golub_welsch(QuadratureKind.JACOBI, 9, alpha, beta).arrays()
            ref_x, ref_w = special.roots_jacobi(9, alpha, beta)
            assert np.allclose(x, ref_x, atol=1e-13)
            assert np.allclose(w, ref_w, rtol=1e-10)

    def test_exact_on_polynomials(self):
        """Test n-point rules integrate degree 2n - 1 exactly."""
        x, w = golub_welsch(QuadratureKind.LAGUERRE, 6, 2.0).arrays()
        for k in range(12):
            assert math.fsum(w * x**k) == pytest.approx(math.gamma(k + 3.0), rel=1e-10)

    def test_single_node(self):
        """Test the one-point rule."""
        rule = golub_welsch(QuadratureKind.LEGENDRE, 1)
        assert rule.nodes == (0.0,)
        assert rule.weights[0] == pytest.approx(2.0)

    def test_invalid(self):
        """Test invalid orders and exponents."""
        with pytest.raises(DomainError):
            golub_welsch(QuadratureKind.LEGENDRE, 0)
        with pytest.raises(DomainError):
            golub_welsch(QuadratureKind.LAGUERRE, 4, -1.0)
        with pytest.raises(DomainError):
            golub_welsch(QuadratureKind.JACOBI, 4, 0.0, -2.0)


class TestTridiagonal:
    """Test the symmetric tridiagonal eigen-solver and Sturm counts."""

    def test_eigen_residual(self):
        """Test T v = lambda v for a random matrix."""
        rng = np.random.default_rng(3)
        T = SymTriMatrix(diag=tuple(rng.normal(size=15)), offdiag=tuple(rng.normal(size=14)))
        values, vectors = symtri_eigen(T)
        dense = T.to_dense()
        assert np.all(np.diff(values) >= 0)
        assert np.max(np.abs(dense @ vectors - vectors * values)) <= 1e-12 * np.linalg.norm(dense, 2)
        assert np.allclose(values, np.linalg.eigvalsh(dense), atol=1e-12)

    def test_one_by_one(self):
        """Test the trivial matrix."""
        values, vectors = symtri_eigen(SymTriMatrix(diag=(3.5,)))
        assert values.tolist() == [3.5]
        assert vectors.tolist() == [[1.0]]

    def test_sturm_count(self):
        """Test the count of eigenvalues below points between eigenvalues."""
        rng = np.random.default_rng(5)
        for _ in range(10):
            size = int(rng.integers(2, 12))
            T = SymTriMatrix(diag=tuple(rng.normal(size=size)), offdiag=tuple(rng.normal(size=size - 1)))
            values = np.linalg.eigvalsh(T.to_dense())
            assert sturm_count(T, float(values[0] - 1.0)) == 0
            assert sturm_count(T, float(values[-1] + 1.0)) == size
            for k in range(1, size):
                assert sturm_count(T, float(0.5 * (values[k - 1] + values[k]))) == k


class TestConvergence:
    """Test the node-doubling protocol."""

    def test_converges(self):
        """Test a polynomial integral converges on the first doubling."""
        value, delta, nodes = converge(
            lambda n: math.fsum(golub_welsch(QuadratureKind.LEGENDRE, n).arrays()[1]), "constant"
        )
        assert value == pytest.approx(2.0)
        assert delta < settings.quad_tolerance
        assert nodes == 2 * settings.quad_start_nodes

    def test_array_values(self):
        """Test array-valued evaluations."""
        value, _, _ = converge(lambda n: np.array([1.0, 2.0]), "array")
        assert value.tolist() == [1.0, 2.0]

    def test_cancelling_values_use_magnitude(self):
        """Test a value that cancels to zero converges against the magnitude of its terms."""
        terms = np.array([1.0e6, -1.0e6, 3.0e-5, -3.0e-5])
        value, delta, _ = converge(lambda n: (math.fsum(terms) + 1e-9 * (n % 3), math.fsum(np.abs(terms))), "cancelling")
        assert value == pytest.approx(0.0, abs=1e-8)
        assert delta < settings.quad_tolerance

    def test_failure(self):
        """Test the cap raises ConvergenceError with diagnostics."""
        with pytest.raises(ConvergenceError) as info:
            converge(lambda n: float(n), "diverging")
        assert info.value.nodes == settings.quad_max_nodes
        assert info.value.delta > 0


class TestNormalization:
    """Test numerically fixed normalization constants."""

    def test_ground_state_constants(self):
        """Test closed-form ground-state constants."""
        assert radial_constant(0, 0.0, 0.0, 1.0) == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert polar_constant(0, 0.0, 2.0) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-12)
        assert angular_constant(0, 0.0, 0.0) == pytest.approx(1.0 / (math.pi * math.sqrt(2.0)), rel=1e-12)

    def test_polar_closed_form(self):
        """Test kappa = a sqrt(2 Gamma(n + m + 1) / n!) / Gamma(m + 1)."""
        n, m, a = 3, 1.7, 1.3
        expected = a * math.sqrt(2.0 * math.gamma(n + m + 1.0) / math.factorial(n)) / math.gamma(m + 1.0)
        assert polar_constant(n, m, a) == pytest.approx(expected, rel=1e-12)

    def test_radial_closed_form(self):
        """Test C = a^2 sqrt(2 Gamma(N/2 + j + delta + 2) / (N/2 - j)!) / Gamma(2j + delta + 2)."""
        N, j, delta, a = 4, 1.0, 0.6, 1.0
        expected = (
            a * a
            * math.sqrt(2.0 * math.gamma(N / 2 + j + delta + 2.0) / math.factorial(int(N / 2 - j)))
            / math.gamma(2 * j + delta + 2.0)
        )
        assert radial_constant(N, j, delta, a) == pytest.approx(expected, rel=1e-12)

    def test_normalize_numeric_dispatch(self):
        """Test the three kinds and their argument checks."""
        params = SystemParams(c1=0.5, c2=2.0)
        sec = sector(params, "1/2", "1/2")
        j = HalfInt.of("3/2")
        assert normalize_numeric(NormalizationKind.RADIAL, sec, params, N=3, j=j) > 0
        assert normalize_numeric(NormalizationKind.ANGULAR, sec, params, j=j) > 0
        assert normalize_numeric(NormalizationKind.POLAR, sec, params, n_a=1, axis=2) == pytest.approx(
            polar_constant(1, sec.m2, params.a)
        )
        with pytest.raises(DomainError):
            normalize_numeric(NormalizationKind.RADIAL, sec, params, N=3)
        with pytest.raises(DomainError):
            normalize_numeric(NormalizationKind.RADIAL, sec, params, N=2, j=j)
        with pytest.raises(DomainError):
            normalize_numeric(NormalizationKind.ANGULAR, sec, params, j=HalfInt.of(1))
