"""Prolate spheroidal basis built algebraically.

Q = Lambda + R * Omega~ with R = a^2 d^2 / 4 is assembled in the Eulerian basis
(Lambda diagonal) or in the double polar basis (Omega~ diagonal) and
diagonalized as a symmetric tridiagonal matrix. The off-diagonal operator
matrices come from the W-transform of the known spectra; the printed closed
forms and the derived closed forms are kept as validation targets.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.config.settings import settings
from src.models.quantum_models import HalfInt, SectorParams
from src.models.result_models import (
    Basis,
    CoefficientMethod,
    MatrixMethod,
    RecursionSource,
    ResidualReport,
    SpheroidalSolution,
    SymTriMatrix,
)
from src.services.interbasis import InterbasisCalculator
from src.services.oscillator import (
    lambda_eigenvalue,
    list_euler_states,
    list_polar_states,
    omega_tilde,
)
from src.services.quadrature import symtri_eigen

logger = logging.getLogger(__name__)

# Entries outside the tridiagonal band larger than this are reported
BAND_TOLERANCE = 1e-10


def _nan_to_none(values: np.ndarray) -> list[Optional[float]]:
    return [None if not np.isfinite(v) else float(v) for v in values]


class SpheroidalSolver:
    """Operator matrices, spectra and expansion vectors of the spheroidal basis."""

    @staticmethod
    def a_coeff(j: HalfInt, N: int, sec: SectorParams) -> float:
        """
        Coupling A^j exactly as printed:

            sqrt((j - m_minus + delta1)(j + m_minus + delta2))
            * sqrt[(j - m_plus)(j + m_plus + delta)(N - 2j)(N + 2j + 2 delta)
                   / (4 c^2 (2c - 1)(2c + 1))],   c = j + delta/2.

        Zero at the ends of the range, where (j - m_plus) or (N - 2j) vanishes.
        """
        jv = float(j)
        d = sec.delta
        if jv - sec.m_plus <= 0 or N - 2.0 * jv <= 0:
            return 0.0
        c = jv + d / 2.0
        outer = (jv - sec.m_minus + sec.delta1) * (jv + sec.m_minus + sec.delta2)
        inner = (
            (jv - sec.m_plus) * (jv + sec.m_plus + d) * (N - 2.0 * jv) * (N + 2.0 * jv + 2.0 * d)
        ) / (4.0 * c * c * (2.0 * c - 1.0) * (2.0 * c + 1.0))
        return math.sqrt(outer) * math.sqrt(inner)

    @staticmethod
    def a_coeff_derived(j: HalfInt, N: int, sec: SectorParams) -> float:
        """
        Magnitude of the coupling between j - 1 and j that the W-transform produces,
        so that Omega~[j-1][j] = -4 A:

            A^2 = (j - m_plus)(j + m_plus + delta)(j + m_minus + delta1)(j - m_minus + delta2)
                  (N/2 - j + 1)(N/2 + j + delta + 1) / (4 c^2 (2c - 1)(2c + 1)).
        """
        jv = float(j)
        d = sec.delta
        if jv - sec.m_plus <= 0 or jv > N / 2.0:
            return 0.0
        c = jv + d / 2.0
        radicand = (
            (jv - sec.m_plus) * (jv + sec.m_plus + d)
            * (jv + sec.m_minus + sec.delta1) * (jv - sec.m_minus + sec.delta2)
            * (N / 2.0 - jv + 1.0) * (N / 2.0 + jv + d + 1.0)
        ) / (4.0 * c * c * (2.0 * c - 1.0) * (2.0 * c + 1.0))
        return math.sqrt(radicand)

    @staticmethod
    def _printed_omega_diagonal(j: float, sec: SectorParams) -> float:
        denom = (2.0 * j + sec.delta) * (2.0 * j + sec.delta + 2.0)
        numer = (sec.m1 + sec.m2) * (sec.m1 - sec.m2)
        if denom == 0.0:
            return 0.0 if numer == 0.0 else math.nan
        return numer / denom

    @staticmethod
    def omega_matrix_euler(N: int, sec: SectorParams, method: MatrixMethod = MatrixMethod.ORACLE) -> np.ndarray:
        """
        Dimensionless Omega~ over the Eulerian states j (physical Omega = 2 a^2 Omega~).

        Args:
            N: Principal quantum number
            sec: Sector
            method: ORACLE is W~ diag(Omega~(N1)) W~^T with W~ from the inverse
                coefficients; DERIVED is the closed form
                    diag (m1+m2)(m1-m2)(N+delta+2)/((2j+delta)(2j+delta+2)), off-diagonal -4 A;
                CLOSED_FORM is the printed matrix with off-diagonals -2 A^{j+1}/(2j+delta)
                and -2 A^j/(2j+delta), not symmetric in general, NaN where 2j + delta = 0

        Returns:
            Dense (dim x dim) array
        """
        states = list_euler_states(N, sec)
        dim = len(states)
        if method == MatrixMethod.ORACLE:
            W_inv = InterbasisCalculator.inverse_table(N, sec)
            spectrum = np.array([omega_tilde(p, sec) for p in list_polar_states(N, sec)])
            return (W_inv * spectrum) @ W_inv.T

        matrix = np.zeros((dim, dim))
        for k, q in enumerate(states):
            j = q.j.value
            lam = 2.0 * j + sec.delta
            if method == MatrixMethod.DERIVED:
                numer = (sec.m1 + sec.m2) * (sec.m1 - sec.m2) * (N + sec.delta + 2.0)
                matrix[k, k] = 0.0 if lam == 0.0 else numer / (lam * (lam + 2.0))
                if k > 0:
                    value = -4.0 * SpheroidalSolver.a_coeff_derived(q.j, N, sec)
                    matrix[k - 1, k] = matrix[k, k - 1] = value
                continue

            matrix[k, k] = SpheroidalSolver._printed_omega_diagonal(j, sec)
            if k + 1 < dim:
                upper = SpheroidalSolver.a_coeff(states[k + 1].j, N, sec)
                matrix[k, k + 1] = -2.0 * upper / lam if lam != 0.0 else math.nan
            if k > 0:
                lower = SpheroidalSolver.a_coeff(q.j, N, sec)
                matrix[k, k - 1] = -2.0 * lower / lam if lam != 0.0 else math.nan
        return matrix

    @staticmethod
    def lambda_matrix_polar(N: int, sec: SectorParams, method: MatrixMethod = MatrixMethod.ORACLE) -> np.ndarray:
        """
        Lambda over the double polar states N1.

        Args:
            N: Principal quantum number
            sec: Sector
            method: ORACLE is W diag(lambda_j) W^T with W from the continued
                Clebsch-Gordan form; DERIVED is the closed form
                    diag a(a+1) + b(b+1) + 2 alpha beta,  [N1][N1+1] = -sqrt(N2 (N1+1)(N1+m1+1)(N2+m2));
                CLOSED_FORM is the printed matrix

        Returns:
            Dense (dim x dim) array
        """
        rows = list_polar_states(N, sec)
        dim = len(rows)
        if method == MatrixMethod.ORACLE:
            W = InterbasisCalculator.coefficient_table(N, sec, CoefficientMethod.CG).matrix
            spectrum = np.array([lambda_eigenvalue(q.j, sec) for q in list_euler_states(N, sec)])
            return (W * spectrum) @ W.T

        matrix = np.zeros((dim, dim))
        if dim == 0:
            return matrix
        euler0 = list_euler_states(N, sec)[0]
        for k, p in enumerate(rows):
            N1, N2 = p.N1, p.N2
            if method == MatrixMethod.DERIVED:
                a, alpha, b, beta, _, _ = InterbasisCalculator.cg_arguments(p, euler0, sec)
                matrix[k, k] = a * (a + 1.0) + b * (b + 1.0) + 2.0 * alpha * beta
                if k + 1 < dim:
                    value = -math.sqrt(N2 * (N1 + 1.0) * (N1 + sec.m1 + 1.0) * (N2 + sec.m2))
                    matrix[k, k + 1] = matrix[k + 1, k] = value
                continue

            matrix[k, k] = (
                (N1 + 1.0) * (N2 + sec.m_minus)
                + (N / 2.0 - N1 + sec.delta2) * (N1 + abs(sec.M2) + sec.delta2)
                + sec.m_minus * (sec.m_plus + sec.delta2)
                + 0.25 * (sec.delta1 - sec.delta2) * (sec.delta1 - sec.delta2 - 2.0)
            )
            if k + 1 < dim:
                matrix[k, k + 1] = -math.sqrt(N2 * (N1 + 1.0) * (N1 + sec.m1 + 1.0) * (N2 + sec.m2))
            if k > 0:
                matrix[k, k - 1] = -math.sqrt(N1 * (N2 + 1.0) * (N1 + sec.m1 + 1.0) * (N2 + sec.m2 + 1.0))
        return matrix

    @staticmethod
    def build_q_matrix(N: int, sec: SectorParams, R: float, basis: Basis = Basis.EULER) -> np.ndarray:
        """
        Q = Lambda + R * Omega~ in the chosen basis, using the oracle matrices.

        Raises:
            ValueError: If R < 0
        """
        if R < 0:
            raise ValueError(f"Spheroidal coupling R must be >= 0, got {R}")
        if basis == Basis.EULER:
            lam = np.diag([lambda_eigenvalue(q.j, sec) for q in list_euler_states(N, sec)])
            return lam + R * SpheroidalSolver.omega_matrix_euler(N, sec, MatrixMethod.ORACLE)
        omega = np.diag([omega_tilde(p, sec) for p in list_polar_states(N, sec)])
        return SpheroidalSolver.lambda_matrix_polar(N, sec, MatrixMethod.ORACLE) + R * omega

    @staticmethod
    def tridiagonal(matrix: np.ndarray, label: str = "") -> SymTriMatrix:
        """Band of a dense matrix, with a warning when anything outside the band is not negligible."""
        if matrix.shape[0] > 2:
            outside = np.triu(np.abs(matrix), 2)
            worst = float(outside.max())
            if worst > BAND_TOLERANCE:
                logger.warning(f"{label}: entry {worst:.3e} outside the tridiagonal band dropped")
        return SymTriMatrix.from_dense(0.5 * (matrix + matrix.T))

    @staticmethod
    def spectrum(N: int, sec: SectorParams, R: float, basis: Basis = Basis.EULER) -> np.ndarray:
        """Ascending eigenvalues of build_q_matrix; the Eulerian build at R = 0 returns the lambda_j themselves."""
        states = list_euler_states(N, sec)
        if not states:
            return np.zeros(0)
        if R == 0.0 and basis == Basis.EULER:
            return np.sort([lambda_eigenvalue(q.j, sec) for q in states])
        q = SpheroidalSolver.build_q_matrix(N, sec, R, basis)
        values, _ = symtri_eigen(SpheroidalSolver.tridiagonal(q, f"Q[{basis.value}] N={N}"))
        return values

    @staticmethod
    def spectrum_delta(N: int, sec: SectorParams, R: float) -> np.ndarray:
        """|Q_q(Eulerian build) - Q_q(double polar build)| for each q."""
        euler = SpheroidalSolver.spectrum(N, sec, R, Basis.EULER)
        if not euler.size:
            return euler
        return np.abs(euler - SpheroidalSolver.spectrum(N, sec, R, Basis.POLAR))

    @staticmethod
    def solve_spheroidal(N: int, sec: SectorParams, R: float) -> SpheroidalSolution:
        """
        Diagonalize Q in the Eulerian basis.

        Eigenvalues are ascending and define q. Each U row is an eigenvector
        over j, its largest-magnitude component made positive; V = U W^T maps
        it onto the double polar states.

        Args:
            N: Principal quantum number
            sec: Sector
            R: Dimensionless coupling a^2 d^2 / 4

        Returns:
            SpheroidalSolution (empty for an empty multiplet)
        """
        cols = list_euler_states(N, sec)
        rows = list_polar_states(N, sec)
        if not cols:
            return SpheroidalSolution(N=N, sector=sec, R=R)

        q_matrix = SpheroidalSolver.build_q_matrix(N, sec, R, Basis.EULER)
        values, vectors = symtri_eigen(SpheroidalSolver.tridiagonal(q_matrix, f"Q N={N} R={R}"))
        U = vectors.T.copy()
        for row in U:
            if row[np.argmax(np.abs(row))] < 0:
                row *= -1.0

        W = InterbasisCalculator.coefficient_table(N, sec, CoefficientMethod.CG).matrix
        V = U @ W.T

        gaps = np.diff(values)
        if gaps.size and gaps.min() < settings.degeneracy_tolerance:
            logger.warning(f"Near-degenerate Q eigenvalues at N={N} R={R}: min gap {gaps.min():.2e}")

        logger.debug(f"Solved spheroidal N={N} sector {sec.label()} R={R} dim={len(values)}")
        return SpheroidalSolution(
            N=N,
            sector=sec,
            R=R,
            j_values=[q.j.value for q in cols],
            n1_values=[p.N1 for p in rows],
            q_values=[float(v) for v in values],
            U=[[float(v) for v in row] for row in U],
            V=[[float(v) for v in row] for row in V],
        )

    @staticmethod
    def recursion_residual(solution: SpheroidalSolution, source: RecursionSource) -> ResidualReport:
        """
        Per-eigenvector residuals of the U and V three-term recursions.

        ORACLE_CONSISTENT uses the W-transformed operator matrices, so the
        residual is an eigen-residual. PRINTED uses the printed
        coefficients: the U relation is multiplied through by R,
            R (A^{j+1} U^{j+1} + A^j U^{j-1}) = (Q - lambda_j - R D_j) U^j,
        with D_j the printed diagonal, and the V relation keeps
        (N - N1 + delta2)(N1 + m2) and the R * Omega~ term in its diagonal.
        Undefined coefficients yield None.
        """
        N, sec, R = solution.N, solution.sector, solution.R
        if solution.dimension == 0:
            return ResidualReport(N=N, R=R, source=source)
        U = solution.U_matrix
        V = solution.V_matrix
        Q = np.asarray(solution.q_values)
        cols = list_euler_states(N, sec)
        rows = list_polar_states(N, sec)
        lam = np.array([lambda_eigenvalue(q.j, sec) for q in cols])
        omega = np.array([omega_tilde(p, sec) for p in rows])

        if source == RecursionSource.ORACLE_CONSISTENT:
            q_euler = np.diag(lam) + R * SpheroidalSolver.omega_matrix_euler(N, sec, MatrixMethod.ORACLE)
            q_polar = SpheroidalSolver.lambda_matrix_polar(N, sec, MatrixMethod.ORACLE) + R * np.diag(omega)
            u_res = np.max(np.abs(U @ q_euler.T - Q[:, None] * U), axis=1)
            v_res = np.max(np.abs(V @ q_polar.T - Q[:, None] * V), axis=1)
            return ResidualReport(
                N=N, R=R, source=source, u_residuals=_nan_to_none(u_res), v_residuals=_nan_to_none(v_res)
            )

        dim = len(cols)
        A = np.array([SpheroidalSolver.a_coeff(q.j, N, sec) for q in cols])
        D = np.array([SpheroidalSolver._printed_omega_diagonal(q.j.value, sec) for q in cols])
        u_res = np.zeros(dim)
        for k in range(dim):
            up = A[k + 1] * U[:, k + 1] if k + 1 < dim else 0.0
            down = A[k] * U[:, k - 1] if k > 0 else 0.0
            lhs = R * (up + down)
            rhs = (Q - lam[k] - R * D[k]) * U[:, k]
            u_res = np.maximum(u_res, np.abs(lhs - rhs)) if k else np.abs(lhs - rhs)

        v_res = np.zeros(dim)
        for k, p in enumerate(rows):
            N1, N2 = p.N1, p.N2
            diag = (
                (N1 + 1.0) * (N2 + sec.m_minus)
                + (N - N1 + sec.delta2) * (N1 + sec.m2)
                + 0.25 * (sec.delta1 - sec.delta2) * (sec.delta1 - sec.delta2 - 2.0)
                + sec.m_minus * (sec.m_plus + sec.delta2)
                + R * omega[k]
            )
            lhs = (diag - Q) * V[:, k]
            rhs = 0.0
            if k + 1 < dim:
                rhs = rhs + math.sqrt(N2 * (N1 + 1.0) * (N1 + sec.m1 + 1.0) * (N2 + sec.m2)) * V[:, k + 1]
            if k > 0:
                rhs = rhs + math.sqrt(N1 * (N2 + 1.0) * (N1 + sec.m1 + 1.0) * (N2 + sec.m2 + 1.0)) * V[:, k - 1]
            v_res = np.maximum(v_res, np.abs(lhs - rhs)) if k else np.abs(lhs - rhs)

        return ResidualReport(
            N=N, R=R, source=source, u_residuals=_nan_to_none(u_res), v_residuals=_nan_to_none(v_res)
        )

    @staticmethod
    def perturbation_exponent(N: int, sec: SectorParams, r_values: tuple[float, ...] = (1e-2, 1e-3, 1e-4)) -> list[float]:
        """
        Fitted exponent p in |Q_q(R) - lambda_q| ~ R^p for each q.

        States whose first-order shift vanishes (zero diagonal of Omega~) give
        p close to 2; they are returned as fitted, the caller picks sectors.
        """
        lam = np.sort([lambda_eigenvalue(q.j, sec) for q in list_euler_states(N, sec)])
        logs_r = np.log(np.asarray(r_values, dtype=float))
        deviations = np.array([np.abs(SpheroidalSolver.spectrum(N, sec, R) - lam) for R in r_values])
        exponents = []
        for q in range(lam.size):
            column = deviations[:, q]
            if np.any(column <= 0):
                exponents.append(math.nan)
                continue
            slope, _ = np.polyfit(logs_r, np.log(column), 1)
            exponents.append(float(slope))
        return exponents


def spectral_projectors(solution: SpheroidalSolution, use_v: bool = False, tolerance: Optional[float] = None) -> list[tuple[list[int], np.ndarray]]:
    """
    Orthogonal projectors onto groups of (near-)degenerate Q eigenvalues.

    Args:
        solution: Spheroidal solution
        use_v: Build projectors from V rows instead of U rows
        tolerance: Gap below which neighbouring eigenvalues are grouped

    Returns:
        List of (member indices q, projector matrix)
    """
    tol = tolerance if tolerance is not None else settings.degeneracy_tolerance
    vectors = solution.V_matrix if use_v else solution.U_matrix
    groups: list[list[int]] = []
    for q, value in enumerate(solution.q_values):
        if groups and value - solution.q_values[groups[-1][-1]] < tol:
            groups[-1].append(q)
        else:
            groups.append([q])
    return [(group, vectors[group].T @ vectors[group]) for group in groups]
