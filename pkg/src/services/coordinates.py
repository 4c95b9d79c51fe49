"""Coordinate maps between Cartesian, Eulerian, double polar and prolate spheroidal
coordinates on R^4, the Kustaanheimo-Stiefel map and the oscillator potential.

Both complex pairs share the phase convention
    u0 + i u1 = rho1 exp(i phi1),  u2 + i u3 = rho2 exp(i phi2),
with rho1 = u cos(beta/2), rho2 = u sin(beta/2), phi1 = (alpha + gamma)/2
and phi2 = (alpha - gamma)/2.
"""

import logging
import math

from src.models.coordinate_models import (
    FOUR_PI,
    TWO_PI,
    DoublePolarCoords,
    EulerCoords,
    KSImage,
    Point4,
    SpheroidalCoords,
)
from src.models.quantum_models import SystemParams

logger = logging.getLogger(__name__)


def _wrap(angle: float, period: float) -> float:
    """Reduce an angle into [0, period)."""
    r = math.fmod(angle, period)
    if r < 0:
        r += period
    if r >= period:
        r -= period
    return r


def _from_pairs(rho1: float, phi1: float, rho2: float, phi2: float) -> Point4:
    return Point4(
        u0=rho1 * math.cos(phi1),
        u1=rho1 * math.sin(phi1),
        u2=rho2 * math.cos(phi2),
        u3=rho2 * math.sin(phi2),
    )


def euler_to_cartesian(point: EulerCoords) -> Point4:
    """Map (u, alpha, beta, gamma) to (u0, u1, u2, u3)."""
    return _from_pairs(
        point.u * math.cos(point.beta / 2.0),
        (point.alpha + point.gamma) / 2.0,
        point.u * math.sin(point.beta / 2.0),
        (point.alpha - point.gamma) / 2.0,
    )


def dp_to_cartesian(point: DoublePolarCoords) -> Point4:
    """Map (rho1, rho2, phi1, phi2) to (u0, u1, u2, u3)."""
    return _from_pairs(point.rho1, point.phi1, point.rho2, point.phi2)


def spheroidal_to_cartesian(point: SpheroidalCoords) -> Point4:
    """
    Map prolate spheroidal coordinates to Cartesian ones.

    rho1 = (d/2) sqrt((xi+1)(1+eta)) and rho2 = (d/2) sqrt((xi-1)(1-eta)),
    so eta = 1 or xi = 1 collapse one of the two planes.
    """
    half_d = point.d / 2.0
    rho1 = half_d * math.sqrt((point.xi + 1.0) * (1.0 + point.eta))
    rho2 = half_d * math.sqrt(max(0.0, (point.xi - 1.0) * (1.0 - point.eta)))
    return _from_pairs(
        rho1,
        (point.alpha + point.gamma) / 2.0,
        rho2,
        (point.alpha - point.gamma) / 2.0,
    )


def dp_from_euler(point: EulerCoords) -> DoublePolarCoords:
    """rho1 = u cos(beta/2), rho2 = u sin(beta/2), phi1,2 = (alpha +- gamma)/2."""
    return DoublePolarCoords(
        rho1=point.u * math.cos(point.beta / 2.0),
        rho2=point.u * math.sin(point.beta / 2.0),
        phi1=_wrap((point.alpha + point.gamma) / 2.0, TWO_PI),
        phi2=_wrap((point.alpha - point.gamma) / 2.0, TWO_PI),
    )


def euler_from_dp(point: DoublePolarCoords) -> EulerCoords:
    """
    Inverse of dp_from_euler on the canonical ranges.

    alpha = phi1 + phi2 and gamma = phi1 - phi2; whenever alpha is reduced
    by 2 pi, gamma is shifted by 2 pi as well, which leaves phi2 fixed and
    moves phi1 by a full turn.
    """
    alpha = point.phi1 + point.phi2
    gamma = point.phi1 - point.phi2
    if alpha >= TWO_PI:
        alpha -= TWO_PI
        gamma -= TWO_PI
    return EulerCoords(
        u=math.hypot(point.rho1, point.rho2),
        alpha=_wrap(alpha, TWO_PI),
        beta=2.0 * math.atan2(point.rho2, point.rho1),
        gamma=_wrap(gamma, FOUR_PI),
    )


def cartesian_to_dp(point: Point4) -> DoublePolarCoords:
    """Polar decomposition of the two complex pairs."""
    return DoublePolarCoords(
        rho1=math.hypot(point.u0, point.u1),
        rho2=math.hypot(point.u2, point.u3),
        phi1=_wrap(math.atan2(point.u1, point.u0), TWO_PI),
        phi2=_wrap(math.atan2(point.u3, point.u2), TWO_PI),
    )


def cartesian_to_euler(point: Point4) -> EulerCoords:
    """Eulerian coordinates of a Cartesian point."""
    return euler_from_dp(cartesian_to_dp(point))


def cartesian_to_spheroidal(point: Point4, d: float) -> SpheroidalCoords:
    """
    Spheroidal coordinates of a Cartesian point for interfocus distance d.

    With P = 4 rho1^2/d^2 and S = 4 rho2^2/d^2 one has xi + eta = (P + S)/2
    and xi * eta = (P - S)/2 - 1; xi is the larger root.

    Raises:
        ValueError: If d <= 0
    """
    if d <= 0:
        raise ValueError(f"Interfocus distance must be positive, got {d}")
    dp = cartesian_to_dp(point)
    p = 4.0 * dp.rho1**2 / d**2
    s = 4.0 * dp.rho2**2 / d**2
    half_sum = (p + s) / 4.0
    product = (p - s) / 2.0 - 1.0
    xi = max(1.0, half_sum + math.sqrt(max(0.0, half_sum * half_sum - product)))
    eta = min(1.0, max(-1.0, product / xi))
    euler = euler_from_dp(dp)
    return SpheroidalCoords(xi=xi, eta=eta, alpha=euler.alpha, gamma=euler.gamma, d=d)


def ks_map(point: Point4) -> KSImage:
    """
    Generalized Kustaanheimo-Stiefel map R^4 -> R^3 x [0, 4 pi).

    x + i y = 2 (u0 + i u1)(u2 + i u3), z = u0^2 + u1^2 - u2^2 - u3^2, and
    gamma = phi1 - phi2 is the Euler angle of the same point.
    """
    u0, u1, u2, u3 = point.as_tuple()
    return KSImage(
        x=2.0 * math.fsum((u0 * u2, -u1 * u3)),
        y=2.0 * math.fsum((u0 * u3, u1 * u2)),
        z=math.fsum((u0 * u0, u1 * u1, -u2 * u2, -u3 * u3)),
        gamma=cartesian_to_euler(point).gamma,
    )


def potential(point: Point4, params: SystemParams) -> float:
    """
    V = mu omega^2 u^2 / 2 + c1/(u0^2 + u1^2) + c2/(u2^2 + u3^2).

    A vanishing c_a drops its term entirely; a positive c_a on its
    singular plane gives +inf.
    """
    u0, u1, u2, u3 = point.as_tuple()
    value = 0.5 * params.mu * params.omega**2 * point.norm_squared
    for c, rho_sq in ((params.c1, u0 * u0 + u1 * u1), (params.c2, u2 * u2 + u3 * u3)):
        if c == 0.0:
            continue
        value += c / rho_sq if rho_sq > 0 else math.inf
    return value


def potential_spheroidal(point: SpheroidalCoords, params: SystemParams) -> float:
    """Same potential written in spheroidal coordinates."""
    d_sq = point.d**2
    value = params.mu * params.omega**2 * d_sq * (point.xi + point.eta) / 4.0
    for c, product in (
        (params.c1, (point.xi + 1.0) * (1.0 + point.eta)),
        (params.c2, (point.xi - 1.0) * (1.0 - point.eta)),
    ):
        if c == 0.0:
            continue
        value += 4.0 * c / (d_sq * product) if product > 0 else math.inf
    return value
