"""Quadrature ground truth: literal overlap integrals between the two bases,
spectral operator matrices built from them, and orthonormality integrals of
the separable factors.

Nothing here uses the closed-form interbasis coefficients.
"""

import logging
import math
from functools import lru_cache

import numpy as np

from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SectorParams, SystemParams
from src.models.result_models import Basis, OperatorKind, OverlapResult, QuadratureKind
from src.services.oscillator import (
    lambda_eigenvalue,
    list_euler_states,
    list_polar_states,
    omega_tilde,
    sector_phase,
)
from src.services.quadrature import (
    angular_constant,
    converge,
    polar_constant,
    radial_constant,
    rule_arrays,
    weighted_sum,
)
from src.services.specfun import DomainError, hyp1f1_terminating, jacobi_p

logger = logging.getLogger(__name__)


def _overlap_matrix(N: int, sec: SectorParams, params: SystemParams, n: int, rows: list[PolarQN], cols: list[EulerQN]) -> np.ndarray:
    """
    All overlaps <polar|euler> at node count n.

    With x = a^2 u^2 and t = cos(beta) the alpha and gamma integrals give
    8 pi^2, x1 = x(1+t)/2 and x2 = x(1-t)/2, and the integrand becomes
    x^{2 m_plus + delta + 1} e^{-x} (1-t)^{m2} (1+t)^{m1} times a polynomial,
    so Gauss-Laguerre in x and Gauss-Jacobi in t absorb every endpoint power.
    """
    a = params.a
    x, wx = rule_arrays(QuadratureKind.LAGUERRE, n, 2.0 * sec.m_plus + sec.delta + 1.0)
    t, wt = rule_arrays(QuadratureKind.JACOBI, n, sec.m2, sec.m1)
    x1 = np.outer(x, 1.0 + t) / 2.0
    x2 = np.outer(x, 1.0 - t) / 2.0

    # Euler factors reduce to vectors along x and t
    radial_vecs = []
    angular_vecs = []
    col_pref = []
    for q in cols:
        j = q.j.value
        n_j = int(round(j - sec.m_plus))
        n_r = int(round(N / 2.0 - j))
        fr = hyp1f1_terminating(n_r, 2.0 * j + sec.delta + 2.0, x)
        radial_vecs.append(wx * x**n_j * fr)
        angular_vecs.append(wt * jacobi_p(n_j, sec.m2, sec.m1, t))
        col_pref.append(angular_constant(n_j, sec.m1, sec.m2) * radial_constant(N, j, sec.delta, a))

    values = np.empty((len(rows), len(cols)))
    for r, p in enumerate(rows):
        grid = hyp1f1_terminating(p.N1, sec.m1 + 1.0, x1) * hyp1f1_terminating(p.N2, sec.m2 + 1.0, x2)
        row_pref = polar_constant(p.N1, sec.m1, a) * polar_constant(p.N2, sec.m2, a)
        for c in range(len(cols)):
            values[r, c] = row_pref * col_pref[c] * float(radial_vecs[c] @ grid @ angular_vecs[c])

    scale = (math.pi / 2.0) * sector_phase(sec) / (2.0 * a**4) * 2.0 ** (-(sec.m1 + sec.m2))
    return scale * values


@lru_cache(maxsize=512)
def _quadrature_table_cached(N: int, sec: SectorParams, params: SystemParams) -> tuple[tuple[float, ...], ...]:
    rows = list_polar_states(N, sec)
    cols = list_euler_states(N, sec)
    if not rows:
        return ()
    value, delta, nodes = converge(
        lambda n: _overlap_matrix(N, sec, params, n, rows, cols),
        f"overlap table N={N} sector {sec.label()}",
    )
    logger.info(f"Quadrature table N={N} sector {sec.label()}: delta={delta:.2e} at n={nodes}")
    return tuple(tuple(float(v) for v in row) for row in np.atleast_2d(value))


def quadrature_table(N: int, sec: SectorParams, params: SystemParams) -> np.ndarray:
    """
    Interbasis matrix W[N1][j] from overlap integrals of numerically normalized wavefunctions.

    Raises:
        ConvergenceError: If the node-doubling protocol fails
    """
    cached = _quadrature_table_cached(N, sec, params)
    size = len(cached)
    return np.array(cached, dtype=float).reshape(size, size)


def overlap_polar_euler(polar: PolarQN, euler: EulerQN, sec: SectorParams, params: SystemParams) -> OverlapResult:
    """
    Overlap integral of psi_polar with psi_euler.

    States from different sectors are orthogonal through the alpha and gamma
    integrals; the result is exactly zero and no quadrature is run.

    Raises:
        DomainError: If the two states belong to different levels
        ConvergenceError: If the quadrature does not converge
    """
    if (euler.m + euler.s) != polar.M1 or (euler.m - euler.s) != polar.M2:
        return OverlapResult(value=0.0, delta=0.0, nodes=0)
    if polar.N != euler.N:
        raise DomainError(f"Overlap requires a common level, got N={polar.N} and N={euler.N}")
    value, delta, nodes = converge(
        lambda n: _overlap_matrix(euler.N, sec, params, n, [polar], [euler])[0, 0],
        f"overlap {polar} | {euler}",
    )
    return OverlapResult(value=float(value), delta=delta, nodes=nodes)


def align_signs(values: np.ndarray, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Flip whole columns of values so each has a nonnegative inner product with the
    matching column of reference.

    Returns:
        (aligned matrix, per-column signs)
    """
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    signs = np.where(np.sum(values * reference, axis=0) < 0, -1.0, 1.0)
    return values * signs, signs


def matrix_element_numeric(
    op: OperatorKind, basis: Basis, N: int, sec: SectorParams, params: SystemParams
) -> np.ndarray:
    """
    Operator matrix from its known spectrum and the quadrature W table.

    Lambda is diagonal in the Euler basis with lambda_j; Omega (dimensionless,
    Omega = 2 a^2 Omega~) is diagonal in the polar basis with Omega~(N1).
    The other basis is reached by the congruence with W.
    """
    W = quadrature_table(N, sec, params)
    if op == OperatorKind.LAMBDA:
        spectrum = np.diag([lambda_eigenvalue(q.j, sec) for q in list_euler_states(N, sec)])
        return spectrum if basis == Basis.EULER else W @ spectrum @ W.T
    spectrum = np.diag([omega_tilde(p, sec) for p in list_polar_states(N, sec)])
    return spectrum if basis == Basis.POLAR else W.T @ spectrum @ W


def radial_overlap(N: int, N_other: int, j: HalfInt, sec: SectorParams, params: SystemParams) -> float:
    """integral_0^inf u^3 R_{Nj} R_{N'j} du."""
    a = params.a
    jv = j.value
    lam = 2.0 * jv + sec.delta
    n_r, n_r_other = int(round(N / 2.0 - jv)), int(round(N_other / 2.0 - jv))
    norm = radial_constant(N, jv, sec.delta, a) * radial_constant(N_other, jv, sec.delta, a) / (2.0 * a**4)

    def evaluate(n: int) -> tuple[float, float]:
        x, w = rule_arrays(QuadratureKind.LAGUERRE, n, lam + 1.0)
        return weighted_sum(w * hyp1f1_terminating(n_r, lam + 2.0, x) * hyp1f1_terminating(n_r_other, lam + 2.0, x))

    value, _, _ = converge(evaluate, f"radial overlap N={N},{N_other} j={j}")
    return norm * value


def hypermomentum_overlap(N: int, j: HalfInt, j_other: HalfInt, sec: SectorParams, params: SystemParams) -> float:
    """integral_0^inf u R_{Nj} R_{Nj'} du, which equals a^2/(2j + delta + 1) for j = j'."""
    a = params.a
    jv, jw = j.value, j_other.value
    n_r, n_r_other = int(round(N / 2.0 - jv)), int(round(N / 2.0 - jw))
    norm = radial_constant(N, jv, sec.delta, a) * radial_constant(N, jw, sec.delta, a) / (2.0 * a**2)

    def evaluate(n: int) -> tuple[float, float]:
        x, w = rule_arrays(QuadratureKind.LAGUERRE, n, jv + jw + sec.delta)
        f = hyp1f1_terminating(n_r, 2.0 * jv + sec.delta + 2.0, x)
        g = hyp1f1_terminating(n_r_other, 2.0 * jw + sec.delta + 2.0, x)
        return weighted_sum(w * f * g)

    value, _, _ = converge(evaluate, f"hypermomentum overlap N={N} j={j},{j_other}")
    return norm * value


def angular_overlap(j: HalfInt, j_other: HalfInt, sec: SectorParams) -> float:
    """Reduced integral (1/8) integral sin(beta) Z*_{j'} Z_j over the Euler angles, fixed (m, s)."""
    deg = (j - sec.m_plus_half).twice_value // 2
    deg_other = (j_other - sec.m_plus_half).twice_value // 2
    norm = angular_constant(deg, sec.m1, sec.m2) * angular_constant(deg_other, sec.m1, sec.m2)

    def evaluate(n: int) -> tuple[float, float]:
        t, w = rule_arrays(QuadratureKind.JACOBI, n, sec.m2, sec.m1)
        return weighted_sum(w * jacobi_p(deg, sec.m2, sec.m1, t) * jacobi_p(deg_other, sec.m2, sec.m1, t))

    value, _, _ = converge(evaluate, f"angular overlap j={j},{j_other}")
    return math.pi**2 * norm * value * 2.0 ** (-(sec.m1 + sec.m2))


def polar_overlap(n_a: int, n_other: int, M_a: int, delta_a: float, params: SystemParams) -> float:
    """integral_0^inf Phi_{n} Phi_{n'} rho d rho for one circular oscillator."""
    a = params.a
    m_a = abs(M_a) + delta_a
    norm = polar_constant(n_a, m_a, a) * polar_constant(n_other, m_a, a) / (2.0 * a**2)

    def evaluate(n: int) -> tuple[float, float]:
        x, w = rule_arrays(QuadratureKind.LAGUERRE, n, m_a)
        return weighted_sum(w * hyp1f1_terminating(n_a, m_a + 1.0, x) * hyp1f1_terminating(n_other, m_a + 1.0, x))

    value, _, _ = converge(evaluate, f"polar overlap n={n_a},{n_other} m={m_a}")
    return norm * value
