"""Unit tests for the quadrature ground truth."""

import numpy as np
import pytest

from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SystemParams
from src.models.result_models import Basis, CoefficientMethod, MatrixMethod, OperatorKind
from src.services.interbasis import InterbasisCalculator
from src.services.oracle import (
    align_signs,
    angular_overlap,
    hypermomentum_overlap,
    matrix_element_numeric,
    overlap_polar_euler,
    polar_overlap,
    quadrature_table,
    radial_overlap,
)
from src.services.oscillator import lambda_eigenvalue, list_euler_states, list_polar_states, sector
from src.services.specfun import DomainError
from src.services.spheroidal import SpheroidalSolver


@pytest.fixture
def params():
    return SystemParams(mu=1.4, c1=0.5, c2=2.0)


class TestOverlaps:
    """Test individual overlap integrals."""

    def test_matches_table(self, params):
        """Test a single overlap equals the corresponding table entry."""
        sec = sector(params, "1/2", "-1/2")
        table = quadrature_table(3, sec, params)
        p = list_polar_states(3, sec)[1]
        q = list_euler_states(3, sec)[0]
        result = overlap_polar_euler(p, q, sec, params)
        assert result.value == pytest.approx(table[1, 0], abs=1e-10)
        assert result.nodes >= 2
        assert result.delta >= 0.0

    def test_different_sectors_vanish(self, params):
        """Test states of different sectors overlap to exactly zero without quadrature."""
        sec = sector(params, 0, 0)
        p = PolarQN(N1=0, N2=0, M1=1, M2=1)
        q = EulerQN(N=2, j=HalfInt.of(1), m=HalfInt.of(0), s=HalfInt.of(0))
        result = overlap_polar_euler(p, q, sec, params)
        assert result.value == 0.0
        assert result.nodes == 0

    def test_different_levels(self, params):
        """Test a common sector but different levels is refused."""
        sec = sector(params, 0, 0)
        p = PolarQN(N1=1, N2=0, M1=0, M2=0)
        q = EulerQN(N=4, j=HalfInt.of(1), m=HalfInt.of(0), s=HalfInt.of(0))
        with pytest.raises(DomainError):
            overlap_polar_euler(p, q, sec, params)

    def test_table_orthogonal(self, params):
        """Test the quadrature table is orthogonal on its own."""
        sec = sector(params, 1, 0)
        Q = quadrature_table(4, sec, params)
        assert Q.shape == (2, 2)
        assert np.allclose(Q @ Q.T, np.eye(Q.shape[0]), atol=1e-9)


class TestAlignSigns:
    """Test column sign alignment."""

    def test_flips_columns(self):
        """Test columns with negative inner products are flipped."""
        reference = np.array([[1.0, 0.0], [0.0, 1.0]])
        values = np.array([[-1.0, 0.0], [0.0, 1.0]])
        aligned, signs = align_signs(values, reference)
        assert signs.tolist() == [-1.0, 1.0]
        assert aligned.tolist() == reference.tolist()


class TestOperatorMatrices:
    """Test operator matrices from known spectra."""

    def test_lambda_euler_is_diagonal(self, params):
        """Test Lambda in the Euler basis."""
        sec = sector(params, 0, 0)
        matrix = matrix_element_numeric(OperatorKind.LAMBDA, Basis.EULER, 4, sec, params)
        expected = [lambda_eigenvalue(q.j, sec) for q in list_euler_states(4, sec)]
        assert np.allclose(np.diag(matrix), expected)
        assert np.count_nonzero(matrix - np.diag(np.diag(matrix))) == 0

    def test_lambda_polar_matches_derived(self, params):
        """Test the quadrature Lambda matrix against the derived closed form."""
        sec = sector(params, "1/2", "1/2")
        numeric = matrix_element_numeric(OperatorKind.LAMBDA, Basis.POLAR, 5, sec, params)
        derived = SpheroidalSolver.lambda_matrix_polar(5, sec, MatrixMethod.DERIVED)
        assert np.allclose(numeric, derived, atol=1e-8)

    def test_omega_euler_matches_derived(self, params):
        """Test the quadrature Omega~ matrix against the derived closed form."""
        sec = sector(params, "1/2", "-1/2")
        numeric = matrix_element_numeric(OperatorKind.OMEGA, Basis.EULER, 5, sec, params)
        derived = SpheroidalSolver.omega_matrix_euler(5, sec, MatrixMethod.DERIVED)
        assert np.allclose(numeric, derived, atol=1e-8)

    def test_omega_polar_is_diagonal(self, params):
        """Test Omega~ in the polar basis."""
        sec = sector(params, 0, 0)
        matrix = matrix_element_numeric(OperatorKind.OMEGA, Basis.POLAR, 2, sec, params)
        assert matrix[0, 1] == 0.0 and matrix[1, 0] == 0.0

    def test_congruence_with_closed_form(self, params):
        """Test the quadrature W and the closed-form W give the same Lambda matrix."""
        sec = sector(params, 1, 0)
        numeric = matrix_element_numeric(OperatorKind.LAMBDA, Basis.POLAR, 4, sec, params)
        W = InterbasisCalculator.coefficient_table(4, sec, CoefficientMethod.CG).matrix
        spectrum = np.diag([lambda_eigenvalue(q.j, sec) for q in list_euler_states(4, sec)])
        assert np.allclose(numeric, W @ spectrum @ W.T, atol=1e-8)


class TestFactorOrthonormality:
    """Test orthonormality integrals of the separable factors."""

    def test_radial(self, params):
        """Test radial functions of equal j are orthonormal across N."""
        sec = sector(params, 0, 0)
        j = HalfInt.of(1)
        assert radial_overlap(4, 4, j, sec, params) == pytest.approx(1.0, abs=1e-10)
        assert radial_overlap(2, 4, j, sec, params) == pytest.approx(0.0, abs=1e-10)

    def test_hypermomentum(self, params):
        """Test integral u R_j R_j' du = a^2/(2j + delta + 1) delta_jj'."""
        sec = sector(params, 0, 0)
        j, j_other = HalfInt.of(1), HalfInt.of(2)
        expected = params.a**2 / (2.0 + sec.delta + 1.0)
        assert hypermomentum_overlap(4, j, j, sec, params) == pytest.approx(expected, rel=1e-10)
        assert hypermomentum_overlap(4, j, j_other, sec, params) == pytest.approx(0.0, abs=1e-10)

    def test_angular(self, params):
        """Test angular functions are orthonormal."""
        sec = sector(params, "1/2", "1/2")
        j, j_other = HalfInt.of("1/2"), HalfInt.of("3/2")
        assert angular_overlap(j, j, sec) == pytest.approx(1.0, abs=1e-10)
        assert angular_overlap(j_other, j_other, sec) == pytest.approx(1.0, abs=1e-10)
        assert angular_overlap(j, j_other, sec) == pytest.approx(0.0, abs=1e-10)

    def test_polar(self, params):
        """Test circular oscillator factors are orthonormal."""
        assert polar_overlap(2, 2, 1, 0.4, params) == pytest.approx(1.0, abs=1e-10)
        assert polar_overlap(1, 3, 1, 0.4, params) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize(
        "c1, c2, m, s, N, N_other, j",
        [
            (0.5, 7.3, "0", "0", 4, 6, "2"),
            (0.5, 7.3, "1", "1", 4, 6, "2"),
            (7.3, 7.3, "0", "0", 4, 6, "2"),
            (7.3, 7.3, "1/2", "1/2", 5, 7, "3/2"),
            (7.3, 7.3, "3/2", "1/2", 5, 7, "5/2"),
        ],
    )
    def test_radial_vanishing_overlap_converges(self, c1, c2, m, s, N, N_other, j):
        """Test an exactly vanishing overlap converges at strong coupling."""
        params = SystemParams(c1=c1, c2=c2)
        sec = sector(params, m, s)
        jv = HalfInt.of(j)
        assert radial_overlap(N, N_other, jv, sec, params) == pytest.approx(0.0, abs=1e-10)
        assert radial_overlap(N_other, N_other, jv, sec, params) == pytest.approx(1.0, abs=1e-10)

    def test_hypermomentum_vanishing_overlap_converges(self):
        """Test the j != j' hypermomentum integral converges to zero at strong coupling."""
        params = SystemParams(c1=7.3, c2=7.3)
        sec = sector(params, 0, 0)
        assert hypermomentum_overlap(6, HalfInt.of(1), HalfInt.of(3), sec, params) == pytest.approx(0.0, abs=1e-10)
