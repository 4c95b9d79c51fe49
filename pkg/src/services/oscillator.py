"""Double singular oscillator: sectors, spectra, basis state lists and the
Eulerian and double polar wavefunctions.

All normalization constants are fixed by quadrature (see quadrature.py); the
only sign carried by the wavefunctions is the angular phase
(-1)^{(m - s + |m - s|)/2}.
"""

import cmath
import logging
import math
from typing import Union

import numpy as np

from src.models.coordinate_models import DoublePolarCoords, EulerCoords
from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SectorParams, SystemParams
from src.models.result_models import NormalizationKind
from src.services.quadrature import angular_constant, normalize_numeric, polar_constant
from src.services.specfun import DomainError, hyp1f1_terminating, jacobi_p, pochhammer

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _shift(M: int, coupling: float) -> float:
    """delta = sqrt(M^2 + g) - |M|, written without cancellation."""
    if coupling == 0.0:
        return 0.0
    return coupling / (math.sqrt(M * M + coupling) + abs(M))


def sector(params: SystemParams, m: Union[HalfInt, int, str], s: Union[HalfInt, int, str]) -> SectorParams:
    """
    Build the sector (m, s) with its singularity shifts.

    Args:
        params: Physical constants; c1, c2 enter through 2 mu c / hbar^2
        m: Charge m, exact integer or half-integer
        s: Charge s, same parity class as m

    Returns:
        SectorParams with M1 = m + s, M2 = m - s and the derived shifts

    Raises:
        ValueError: If m + s is not an integer
    """
    m = HalfInt.of(m)
    s = HalfInt.of(s)
    total = m + s
    if not total.is_integer():
        raise ValueError(f"Invalid sector: m + s must be an integer (m={m}, s={s})")
    M1 = total.twice_value // 2
    M2 = (m - s).twice_value // 2
    delta1 = _shift(M1, params.coupling(params.c1))
    delta2 = _shift(M2, params.coupling(params.c2))
    return SectorParams(
        m=m,
        s=s,
        M1=M1,
        M2=M2,
        delta1=delta1,
        delta2=delta2,
        m1=abs(M1) + delta1,
        m2=abs(M2) + delta2,
        m_plus=(abs(M1) + abs(M2)) / 2.0,
        m_minus=(abs(M1) - abs(M2)) / 2.0,
    )


def sector_phase(sec: SectorParams) -> float:
    """(-1)^{(m - s + |m - s|)/2}, i.e. -1 exactly when m - s is positive and odd."""
    return -1.0 if sec.M2 > 0 and sec.M2 % 2 else 1.0


def energy(params: SystemParams, N: int, sec: SectorParams) -> float:
    """E_N = hbar omega (N + delta1 + delta2 + 2)."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    return params.hbar * params.omega * (N + sec.delta + 2.0)


def lambda_eigenvalue(j: Union[HalfInt, float], sec: SectorParams) -> float:
    """lambda = (j + delta/2)(j + delta/2 + 1)."""
    c = float(j) + sec.delta / 2.0
    return c * (c + 1.0)


def omega_tilde(polar: PolarQN, sec: SectorParams) -> float:
    """Dimensionless Omega eigenvalue 2 (N1 - N2) + m1 - m2."""
    return 2.0 * (polar.N1 - polar.N2) + sec.m1 - sec.m2


def omega_eigenvalue(polar: PolarQN, sec: SectorParams, params: SystemParams) -> float:
    """Physical Omega eigenvalue 2 a^2 * omega_tilde."""
    return 2.0 * params.a**2 * omega_tilde(polar, sec)


def multiplet_size(N: int, sec: SectorParams) -> int:
    """Number of states of level N in the sector; 0 when N - |M1| - |M2| is odd or negative."""
    rest = N - abs(sec.M1) - abs(sec.M2)
    if rest < 0 or rest % 2:
        return 0
    return rest // 2 + 1


def list_euler_states(N: int, sec: SectorParams) -> list[EulerQN]:
    """Eulerian states j = m_plus, ..., N/2 in ascending order."""
    j0 = sec.m_plus_half
    return [
        EulerQN(N=N, j=j0 + k, m=sec.m, s=sec.s)
        for k in range(multiplet_size(N, sec))
    ]


def list_polar_states(N: int, sec: SectorParams) -> list[PolarQN]:
    """Double polar states N1 = 0, ..., (N - |M1| - |M2|)/2 in ascending order."""
    size = multiplet_size(N, sec)
    return [
        PolarQN(N1=n1, N2=size - 1 - n1, M1=sec.M1, M2=sec.M2)
        for n1 in range(size)
    ]


def enumerate_sectors(N: int, params: SystemParams) -> list[SectorParams]:
    """All sectors with a nonempty level-N multiplet, ordered by (M1, M2)."""
    sectors = []
    for M1 in range(-N, N + 1):
        for M2 in range(-(N - abs(M1)), N - abs(M1) + 1):
            if (N - abs(M1) - abs(M2)) % 2:
                continue
            m = HalfInt(twice_value=M1 + M2)
            s = HalfInt(twice_value=M1 - M2)
            sectors.append(sector(params, m, s))
    return sectors


def level_degeneracy(N: int, params: SystemParams) -> int:
    """Total number of states with principal quantum number N, summed over all sectors."""
    return sum(multiplet_size(N, sec) for sec in enumerate_sectors(N, params))


def _check_euler(q: EulerQN, sec: SectorParams) -> None:
    if q.m != sec.m or q.s != sec.s:
        raise DomainError(f"State (m={q.m}, s={q.s}) does not belong to sector {sec.label()}")


def _check_polar(p: PolarQN, sec: SectorParams) -> None:
    if p.M1 != sec.M1 or p.M2 != sec.M2:
        raise DomainError(f"State (M1={p.M1}, M2={p.M2}) does not belong to sector {sec.label()}")


def angular_theta(beta: ArrayLike, q: EulerQN, sec: SectorParams) -> ArrayLike:
    """
    Real beta-dependent part of Z, phase included:
    N_jms (cos beta/2)^{m1} (sin beta/2)^{m2} P^{(m2, m1)}_{j - m_plus}(cos beta).
    """
    _check_euler(q, sec)
    degree = (q.j - sec.m_plus_half).twice_value // 2
    norm = sector_phase(sec) * angular_constant(degree, sec.m1, sec.m2)
    if np.isscalar(beta):
        beta = float(beta)
        if beta < 0 or beta > math.pi:
            raise DomainError(f"beta must lie in [0, pi], got {beta}")
        t = math.cos(beta)
        if beta == 0.0:
            poly = pochhammer(sec.m2 + 1.0, degree) / math.factorial(degree)
            return norm * poly if sec.m2 == 0 else 0.0
        if beta == math.pi:
            poly = (-1) ** degree * pochhammer(sec.m1 + 1.0, degree) / math.factorial(degree)
            return norm * poly if sec.m1 == 0 else 0.0
        poly = jacobi_p(degree, sec.m2, sec.m1, t)
        return norm * math.cos(beta / 2.0) ** sec.m1 * math.sin(beta / 2.0) ** sec.m2 * poly

    beta = np.asarray(beta, dtype=float)
    poly = jacobi_p(degree, sec.m2, sec.m1, np.cos(beta))
    return norm * np.cos(beta / 2.0) ** sec.m1 * np.sin(beta / 2.0) ** sec.m2 * poly


def angular_Z(beta: float, alpha: float, gamma: float, q: EulerQN, sec: SectorParams) -> complex:
    """Eulerian angular function Z_jms = theta(beta) e^{i m alpha} e^{i s gamma}."""
    theta = angular_theta(beta, q, sec)
    return theta * cmath.exp(1j * (q.m.value * alpha + q.s.value * gamma))


def radial_R(u: ArrayLike, N: int, j: Union[HalfInt, int, str], sec: SectorParams, params: SystemParams) -> ArrayLike:
    """
    Eulerian radial function
    R = C (a u)^{2j + delta} e^{-a^2 u^2 / 2} F(-N/2 + j; 2j + delta + 2; a^2 u^2),
    with C > 0 fixed so that integral u^3 R^2 du = 1.

    Raises:
        DomainError: If N/2 - j is not a nonnegative integer
    """
    j = HalfInt.of(j)
    top = HalfInt(twice_value=N) - j
    if top < 0 or not top.is_integer():
        raise DomainError(f"N/2 - j must be a nonnegative integer (N={N}, j={j})")
    n_r = top.twice_value // 2
    lam = 2.0 * j.value + sec.delta
    C = normalize_numeric(NormalizationKind.RADIAL, sec, params, N=N, j=j)

    if np.isscalar(u):
        if u < 0:
            raise DomainError(f"u must be >= 0, got {u}")
        x = (params.a * float(u)) ** 2
        return C * (params.a * float(u)) ** lam * math.exp(-x / 2.0) * hyp1f1_terminating(n_r, lam + 2.0, x)
    au = params.a * np.asarray(u, dtype=float)
    x = au * au
    return C * au**lam * np.exp(-x / 2.0) * hyp1f1_terminating(n_r, lam + 2.0, x)


def psi_euler(point: EulerCoords, q: EulerQN, sec: SectorParams, params: SystemParams) -> complex:
    """Eulerian basis function psi_Njms = R_Nj(u) Z_jms(alpha, beta, gamma)."""
    return radial_R(point.u, q.N, q.j, sec, params) * angular_Z(point.beta, point.alpha, point.gamma, q, sec)


def phi_polar(rho: ArrayLike, n_a: int, M_a: int, delta_a: float, params: SystemParams) -> ArrayLike:
    """
    Circular oscillator factor
    Phi = kappa x^{m_a/2} e^{-x/2} F(-n_a; m_a + 1; x), x = a^2 rho^2, m_a = |M_a| + delta_a,
    with kappa > 0 fixed so that integral Phi^2 rho d rho = 1.

    Raises:
        DomainError: If n_a < 0
    """
    if n_a < 0:
        raise DomainError(f"Radial quantum number must be >= 0, got {n_a}")
    m_a = abs(M_a) + delta_a
    kappa = polar_constant(n_a, m_a, params.a)
    if np.isscalar(rho):
        x = (params.a * float(rho)) ** 2
        return kappa * x ** (m_a / 2.0) * math.exp(-x / 2.0) * hyp1f1_terminating(n_a, m_a + 1.0, x)
    x = (params.a * np.asarray(rho, dtype=float)) ** 2
    return kappa * x ** (m_a / 2.0) * np.exp(-x / 2.0) * hyp1f1_terminating(n_a, m_a + 1.0, x)


def psi_polar(point: DoublePolarCoords, p: PolarQN, sec: SectorParams, params: SystemParams) -> complex:
    """Double polar basis function (1/2 pi) Phi_1 Phi_2 e^{i M1 phi1} e^{i M2 phi2}."""
    _check_polar(p, sec)
    radial = phi_polar(point.rho1, p.N1, p.M1, sec.delta1, params) * phi_polar(
        point.rho2, p.N2, p.M2, sec.delta2, params
    )
    return radial / (2.0 * math.pi) * cmath.exp(1j * (p.M1 * point.phi1 + p.M2 * point.phi2))
