"""Gaussian quadrature, symmetric tridiagonal eigenproblems and numerical
normalization of the separable wavefunctions.

Rules come from the Golub-Welsch eigen-decomposition of the Jacobi matrix of
the orthogonal-polynomial recurrence. Every integral here runs through the
same convergence protocol: start at QUAD_START_NODES, double until two
successive values agree within QUAD_TOLERANCE, give up past QUAD_MAX_NODES.
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from src.config.settings import settings
from src.models.quantum_models import HalfInt, SectorParams, SystemParams
from src.models.result_models import (
    NormalizationKind,
    QuadratureKind,
    QuadratureRule,
    SymTriMatrix,
)
from src.services.specfun import DomainError, hyp1f1_terminating, jacobi_p

logger = logging.getLogger(__name__)


class ConvergenceError(Exception):
    """Quadrature did not reach the requested tolerance within the node cap."""

    def __init__(self, message: str, value: Optional[float] = None, delta: Optional[float] = None, nodes: int = 0):
        super().__init__(message)
        self.value = value
        self.delta = delta
        self.nodes = nodes


def _recurrence_bands(kind: QuadratureKind, n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Diagonal, off-diagonal and zeroth moment of the Jacobi matrix."""
    k = np.arange(1, n, dtype=float)
    if kind == QuadratureKind.LEGENDRE:
        return np.zeros(n), k / np.sqrt(4.0 * k * k - 1.0), 2.0

    if kind == QuadratureKind.LAGUERRE:
        diag = 2.0 * np.arange(n, dtype=float) + alpha + 1.0
        return diag, np.sqrt(k * (k + alpha)), math.exp(gammaln(alpha + 1.0))

    # Jacobi weight (1 - t)^alpha (1 + t)^beta
    a, b = alpha, beta
    ab = a + b
    mu0 = math.exp((ab + 1.0) * math.log(2.0) + gammaln(a + 1.0) + gammaln(b + 1.0) - gammaln(ab + 2.0))
    kk = np.arange(n, dtype=float)
    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2.0)
    if n > 1:
        two_k = 2.0 * kk[1:] + ab
        diag[1:] = (b * b - a * a) / (two_k * (two_k + 2.0))
    beta_k = np.empty(max(n - 1, 0))
    if n > 1:
        beta_k[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
        kr = k[1:]
        two_k = 2.0 * kr + ab
        beta_k[1:] = (
            4.0 * kr * (kr + a) * (kr + b) * (kr + ab) / (two_k**2 * (two_k + 1.0) * (two_k - 1.0))
        )
    return diag, np.sqrt(beta_k), mu0


@lru_cache(maxsize=256)
def _rule_tuples(kind: QuadratureKind, n: int, alpha: float, beta: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    diag, offdiag, mu0 = _recurrence_bands(kind, n, alpha, beta)
    if n == 1:
        nodes, vectors = diag.copy(), np.ones((1, 1))
    else:
        nodes, vectors = eigh_tridiagonal(diag, offdiag)
    weights = mu0 * vectors[0, :] ** 2
    logger.debug(f"Built {kind.value} rule n={n} alpha={alpha} beta={beta}")
    return tuple(float(x) for x in nodes), tuple(float(w) for w in weights)


def golub_welsch(kind: QuadratureKind, n: int, alpha: float = 0.0, beta: float = 0.0) -> QuadratureRule:
    """
    Gaussian quadrature rule for a classical weight function.

    Weights are mu0 * v0^2 where v0 are the first components of the
    normalized eigenvectors of the Jacobi matrix.

    Args:
        kind: Legendre on [-1, 1], generalized Laguerre x^alpha e^{-x} on
            [0, inf), or Jacobi (1 - t)^alpha (1 + t)^beta on [-1, 1]
        n: Number of nodes
        alpha: Laguerre exponent or first Jacobi exponent
        beta: Second Jacobi exponent

    Returns:
        QuadratureRule exact for polynomials of degree <= 2n - 1

    Raises:
        DomainError: If n < 1 or an exponent is <= -1
    """
    if n < 1:
        raise DomainError(f"Quadrature order must be >= 1, got {n}")
    if kind in (QuadratureKind.LAGUERRE, QuadratureKind.JACOBI) and alpha <= -1:
        raise DomainError(f"alpha must be > -1, got {alpha}")
    if kind == QuadratureKind.JACOBI and beta <= -1:
        raise DomainError(f"beta must be > -1, got {beta}")
    if kind == QuadratureKind.LEGENDRE:
        alpha = beta = 0.0
    elif kind == QuadratureKind.LAGUERRE:
        beta = 0.0

    nodes, weights = _rule_tuples(kind, n, float(alpha), float(beta))
    return QuadratureRule(kind=kind, order=n, alpha=alpha, beta=beta, nodes=nodes, weights=weights)


def rule_arrays(kind: QuadratureKind, n: int, alpha: float = 0.0, beta: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of golub_welsch(kind, n, alpha, beta) as arrays."""
    return golub_welsch(kind, n, alpha, beta).arrays()


def symtri_eigen(matrix: SymTriMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a symmetric tridiagonal matrix.

    Returns:
        (eigenvalues ascending, eigenvectors as columns)
    """
    diag = np.asarray(matrix.diag, dtype=float)
    if matrix.size == 1:
        return diag.copy(), np.ones((1, 1))
    return eigh_tridiagonal(diag, np.asarray(matrix.offdiag, dtype=float))


def sturm_count(matrix: SymTriMatrix, x: float) -> int:
    """Number of eigenvalues strictly below x, from the signs of the LDL^T pivots of T - x I."""
    diag = matrix.diag
    offdiag = matrix.offdiag
    scale = max(1.0, max(abs(v) for v in diag + offdiag)) if offdiag else max(1.0, abs(diag[0]))
    tiny = np.finfo(float).eps * scale
    count = 0
    q = diag[0] - x
    for i in range(matrix.size):
        if i > 0:
            q = (diag[i] - x) - offdiag[i - 1] ** 2 / q
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def weighted_sum(terms: np.ndarray) -> tuple[float, float]:
    """Compensated sum of quadrature terms and the sum of their magnitudes."""
    return math.fsum(terms), math.fsum(np.abs(terms))


def converge(
    evaluate: Callable[[int], Union[float, np.ndarray, tuple[float, float]]],
    label: str,
    tolerance: Optional[float] = None,
) -> tuple[Union[float, np.ndarray], float, int]:
    """
    Run the node-doubling protocol on a quadrature-backed evaluation.

    The change between successive values is the largest absolute difference
    scaled by max(1, magnitude). An evaluation may return (value, magnitude),
    e.g. from weighted_sum, so integrals that cancel to zero are judged
    against the size of their terms; otherwise the magnitude is the largest
    |value|.

    Args:
        evaluate: Maps a node count to a scalar, an array or (scalar, magnitude)
        label: Name used in log messages and errors
        tolerance: Overrides QUAD_TOLERANCE

    Returns:
        (value, last change, node count used)

    Raises:
        ConvergenceError: If the cap is reached before the change drops below tolerance
    """
    tol = tolerance if tolerance is not None else settings.quad_tolerance
    n = settings.quad_start_nodes
    previous, _ = _with_magnitude(evaluate(n))
    delta = math.inf
    while n < settings.quad_max_nodes:
        n *= 2
        current, magnitude = _with_magnitude(evaluate(n))
        delta = float(np.max(np.abs(current - previous))) / max(1.0, magnitude) if current.size else 0.0
        previous = current
        if delta < tol:
            logger.debug(f"{label}: converged at n={n}, delta={delta:.3e}")
            value = float(current) if current.ndim == 0 else current
            return value, delta, n

    logger.error(f"{label}: no convergence at n={n}, last delta={delta:.3e}")
    raise ConvergenceError(
        f"{label} did not converge within {settings.quad_max_nodes} nodes (last delta {delta:.3e})",
        value=float(previous) if previous.ndim == 0 else None,
        delta=delta,
        nodes=n,
    )


def _with_magnitude(result: Union[float, np.ndarray, tuple[float, float]]) -> tuple[np.ndarray, float]:
    if isinstance(result, tuple):
        value, magnitude = result
        return np.asarray(value, dtype=float), float(magnitude)
    value = np.asarray(result, dtype=float)
    return value, float(np.max(np.abs(value))) if value.size else 0.0


@lru_cache(maxsize=4096)
def radial_constant(N: int, j: float, delta: float, a: float) -> float:
    """Positive C with integral_0^inf u^3 R_{Nj}^2 du = 1, i.e. C = a^2 sqrt(2 / I)."""
    n_r = int(round(N / 2.0 - j))
    lam = 2.0 * j + delta

    def evaluate(n: int) -> float:
        x, w = rule_arrays(QuadratureKind.LAGUERRE, n, lam + 1.0)
        f = hyp1f1_terminating(n_r, lam + 2.0, x)
        return math.fsum(w * f * f)

    integral, _, _ = converge(evaluate, f"radial norm N={N} j={j}")
    return a * a * math.sqrt(2.0 / integral)


@lru_cache(maxsize=4096)
def polar_constant(n_a: int, m_a: float, a: float) -> float:
    """Positive kappa with integral_0^inf Phi^2 rho d rho = 1, i.e. kappa = a sqrt(2 / I)."""

    def evaluate(n: int) -> float:
        x, w = rule_arrays(QuadratureKind.LAGUERRE, n, m_a)
        f = hyp1f1_terminating(n_a, m_a + 1.0, x)
        return math.fsum(w * f * f)

    integral, _, _ = converge(evaluate, f"polar norm N_a={n_a} m_a={m_a}")
    return a * math.sqrt(2.0 / integral)


@lru_cache(maxsize=4096)
def angular_constant(degree: int, m1: float, m2: float) -> float:
    """Positive |N_jms| with (1/8) integral sin(beta) |Z|^2 = 1 over the Euler angles."""

    def evaluate(n: int) -> float:
        t, w = rule_arrays(QuadratureKind.JACOBI, n, m2, m1)
        p = jacobi_p(degree, m2, m1, t)
        return math.fsum(w * p * p)

    integral, _, _ = converge(evaluate, f"angular norm n={degree} m1={m1} m2={m2}")
    reduced = integral * 2.0 ** (-(m1 + m2))
    return 1.0 / (math.pi * math.sqrt(reduced))


def normalize_numeric(
    kind: NormalizationKind,
    sector: SectorParams,
    params: SystemParams,
    N: int = 0,
    j: Optional[HalfInt] = None,
    n_a: int = 0,
    axis: int = 1,
) -> float:
    """
    Positive normalization constant fixed by quadrature.

    Args:
        kind: RADIAL (needs N and j), POLAR (needs n_a and axis 1 or 2) or ANGULAR (needs j)
        sector: Sector of the state
        params: Physical constants
        N: Principal quantum number
        j: Hypermomentum
        n_a: Radial quantum number N1 or N2 of the circular oscillator
        axis: 1 for the (rho1, phi1) factor, 2 for (rho2, phi2)

    Returns:
        The constant

    Raises:
        DomainError: If the quantum numbers are inadmissible
        ConvergenceError: If the quadrature does not converge
    """
    if kind == NormalizationKind.POLAR:
        if n_a < 0:
            raise DomainError(f"Polar radial quantum number must be >= 0, got {n_a}")
        m_a = sector.m1 if axis == 1 else sector.m2
        return polar_constant(n_a, m_a, params.a)

    if j is None:
        raise DomainError(f"{kind.value} normalization requires j")
    gap = j - sector.m_plus_half
    if gap < 0 or not gap.is_integer():
        raise DomainError(f"j={j} is not admissible in sector {sector.label()}")

    if kind == NormalizationKind.ANGULAR:
        return angular_constant(gap.twice_value // 2, sector.m1, sector.m2)

    top = HalfInt(twice_value=N) - j
    if top < 0 or not top.is_integer():
        raise DomainError(f"N/2 - j must be a nonnegative integer (N={N}, j={j})")
    return radial_constant(N, j.value, sector.delta, params.a)
