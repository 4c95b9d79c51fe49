"""Expansion coefficients between the double polar and Eulerian bases.

    psi_{N1 N2 M1 M2} = sum_j W[N1][j] psi_{N j m s},   psi_{N j m s} = sum_{N1} W~[j][N1] psi_{N1 N2 M1 M2}

W is computed from two independent closed forms, a terminating 3F2 and an
analytically continued Clebsch-Gordan coefficient, and from quadrature.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.models.quantum_models import EulerQN, PolarQN, SectorParams, SystemParams
from src.models.result_models import CoefficientMethod, CoefficientTable
from src.services.oracle import quadrature_table
from src.services.oscillator import list_euler_states, list_polar_states, sector_phase
from src.services.specfun import DomainError, clebsch_gordan_continued, hyp3f2_unit_terminating, ln_factorial

logger = logging.getLogger(__name__)


class InterbasisCalculator:
    """Closed-form and numerical interbasis coefficients for one sector at a time."""

    @staticmethod
    def _check_pair(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> None:
        """Both states must belong to the same level and sector."""
        if polar.N != euler.N:
            raise DomainError(f"States belong to different levels: N={polar.N} (polar) vs N={euler.N} (Euler)")
        if polar.M1 != sec.M1 or polar.M2 != sec.M2:
            raise DomainError(f"Polar state (M1={polar.M1}, M2={polar.M2}) is outside sector {sec.label()}")
        if euler.m != sec.m or euler.s != sec.s:
            raise DomainError(f"Euler state (m={euler.m}, s={euler.s}) is outside sector {sec.label()}")

    @staticmethod
    def cg_arguments(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> tuple[float, float, float, float, float, float]:
        """
        Arguments (a, alpha, b, beta, c, gamma) of the continued Clebsch-Gordan coefficient.

        a = (N - 2 m_minus + 2 delta2)/4,  alpha = (m2 + N2 - N1)/2 = a - N1,
        b = (N + 2 m_minus + 2 delta1)/4,  beta  = (m1 + N1 - N2)/2 = b - N2,
        c = j + delta/2,                   gamma = (m1 + m2)/2.
        """
        N = euler.N
        a = (N - 2.0 * sec.m_minus + 2.0 * sec.delta2) / 4.0
        b = (N + 2.0 * sec.m_minus + 2.0 * sec.delta1) / 4.0
        alpha = (sec.m2 + polar.N2 - polar.N1) / 2.0
        beta = (sec.m1 + polar.N1 - polar.N2) / 2.0
        c = euler.j.value + sec.delta / 2.0
        gamma = (sec.m1 + sec.m2) / 2.0
        return a, alpha, b, beta, c, gamma

    @staticmethod
    def w_coeff_3f2(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> float:
        """
        Coefficient W[N1][j] from the terminating 3F2 representation.

        W = sigma sqrt[(2j+delta+1) G(N1+m1+1) G(N2+m2+1) G(j+m_minus+delta1+1) G(j+m_plus+delta+1)
                       / (N1! N2! (j-m_plus)! (N/2-j)! G(N/2+j+delta+2) G(j-m_minus+delta2+1))]
            * (N1+N2)! / G(m1+1) * 3F2(-N1, -j+m_plus, j+m_plus+delta+1; m1+1, -N/2+m_plus | 1)

        with sigma = (-1)^{(m-s+|m-s|)/2}. The lower parameter -N/2 + m_plus = -(N1 + N2)
        never reaches a pole before the series terminates.

        Args:
            polar: Row state (N1, N2, M1, M2)
            euler: Column state (N, j, m, s)
            sec: Common sector

        Returns:
            The coefficient

        Raises:
            DomainError: If the states do not share N and sector
        """
        InterbasisCalculator._check_pair(polar, euler, sec)
        N1, N2 = polar.N1, polar.N2
        j = euler.j.value
        n_j = int(round(j - sec.m_plus))
        n_top = int(round(euler.N / 2.0 - j))
        d = sec.delta

        log_root = 0.5 * (
            math.log(2.0 * j + d + 1.0)
            + ln_factorial(N1 + sec.m1)
            + ln_factorial(N2 + sec.m2)
            + ln_factorial(j + sec.m_minus + sec.delta1)
            + ln_factorial(j + sec.m_plus + d)
            - ln_factorial(N1)
            - ln_factorial(N2)
            - ln_factorial(n_j)
            - ln_factorial(n_top)
            - ln_factorial(euler.N / 2.0 + j + d + 1.0)
            - ln_factorial(j - sec.m_minus + sec.delta2)
        )
        log_rest = ln_factorial(N1 + N2) - ln_factorial(sec.m1)
        series = hyp3f2_unit_terminating(
            -float(N1),
            -float(n_j),
            j + sec.m_plus + d + 1.0,
            sec.m1 + 1.0,
            -float(N1 + N2),
        )
        return sector_phase(sec) * math.exp(log_root + log_rest) * series

    @staticmethod
    def w_coeff_cg(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> float:
        """W[N1][j] = (-1)^{N1} sigma C^{c gamma}_{a alpha; b beta} with the arguments of cg_arguments."""
        InterbasisCalculator._check_pair(polar, euler, sec)
        value = clebsch_gordan_continued(*InterbasisCalculator.cg_arguments(polar, euler, sec))
        sign = -1.0 if polar.N1 % 2 else 1.0
        return sign * sector_phase(sec) * value

    @staticmethod
    def w_inverse(euler: EulerQN, polar: PolarQN, sec: SectorParams) -> float:
        """
        Inverse coefficient W~[j][N1] written in the Eulerian parametrization:
        the projections are alpha = a - N1 and beta = gamma - alpha, so the
        sum runs over the coupled multiplet at fixed c.
        """
        InterbasisCalculator._check_pair(polar, euler, sec)
        a, _, b, _, c, gamma = InterbasisCalculator.cg_arguments(polar, euler, sec)
        alpha = a - polar.N1
        beta = gamma - alpha
        sign = -1.0 if polar.N1 % 2 else 1.0
        return sign * sector_phase(sec) * clebsch_gordan_continued(a, alpha, b, beta, c, gamma)

    @staticmethod
    def coefficient_table(
        N: int,
        sec: SectorParams,
        method: CoefficientMethod = CoefficientMethod.CG,
        params: Optional[SystemParams] = None,
    ) -> CoefficientTable:
        """
        Full matrix W[N1][j] for one level and sector.

        Args:
            N: Principal quantum number
            sec: Sector
            method: 3f2 or cg closed form, or quad for the overlap-integral oracle
            params: Physical constants for the quadrature backend (unit system by default)

        Returns:
            CoefficientTable; empty when the sector has no states at level N

        Raises:
            ConvergenceError: If the quadrature backend does not converge
        """
        rows = list_polar_states(N, sec)
        cols = list_euler_states(N, sec)
        if not rows:
            logger.debug(f"Empty multiplet at N={N} in sector {sec.label()}")
            return CoefficientTable(N=N, sector=sec, method=method)

        if method == CoefficientMethod.QUADRATURE:
            values = quadrature_table(N, sec, params or SystemParams())
        else:
            element = (
                InterbasisCalculator.w_coeff_3f2
                if method == CoefficientMethod.THREE_F2
                else InterbasisCalculator.w_coeff_cg
            )
            values = np.array([[element(p, q, sec) for q in cols] for p in rows])

        logger.info(f"Built {method.value} table N={N} sector {sec.label()} dim={len(rows)}")
        return CoefficientTable(
            N=N,
            sector=sec,
            method=method,
            rows=rows,
            cols=cols,
            values=[[float(v) for v in row] for row in values],
        )

    @staticmethod
    def inverse_table(N: int, sec: SectorParams) -> np.ndarray:
        """Matrix W~[j][N1] from w_inverse."""
        rows = list_polar_states(N, sec)
        cols = list_euler_states(N, sec)
        return np.array(
            [[InterbasisCalculator.w_inverse(q, p, sec) for p in rows] for q in cols]
        ).reshape(len(cols), len(rows))


def orthogonality_defect(table: CoefficientTable) -> float:
    """max |W W^T - I| over the table entries (0 for an empty table)."""
    if table.dimension == 0:
        return 0.0
    W = table.matrix
    return float(np.max(np.abs(W @ W.T - np.eye(table.dimension))))
