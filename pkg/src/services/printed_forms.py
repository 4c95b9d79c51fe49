"""Literal transcriptions of the published closed forms and a ledger of how far
each one lies from the corrected value used everywhere else.

Nothing in the computational path depends on this module. Printed formulas
that hit a pole or a negative factorial evaluate to NaN and are counted as
undefined in the ledger.
"""

import logging
import math
from typing import Callable, Iterable, Optional

import numpy as np

from src.models.coordinate_models import SpheroidalCoords
from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SectorParams, SystemParams
from src.models.result_models import (
    CoefficientMethod,
    LedgerEntry,
    MatrixMethod,
    NormalizationKind,
    RecursionSource,
)
from src.services.coordinates import potential, spheroidal_to_cartesian
from src.services.interbasis import InterbasisCalculator
from src.services.oracle import hypermomentum_overlap
from src.services.oscillator import (
    list_euler_states,
    list_polar_states,
    omega_eigenvalue,
    sector,
    sector_phase,
)
from src.services.quadrature import normalize_numeric
from src.services.specfun import DomainError, clebsch_gordan_continued, hyp3f2_unit_terminating, ln_factorial, ln_gamma
from src.services.spheroidal import SpheroidalSolver

logger = logging.getLogger(__name__)


def _guarded(fn: Callable[[], float]) -> float:
    try:
        return fn()
    except (DomainError, ValueError, OverflowError):
        return math.nan


def printed_w_coeff(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> float:
    """Explicit 3F2 coefficient as printed: lower parameter -N/2 + m_plus + 1, Gamma(N/2+j+delta+1), no sector phase."""
    N1, N2 = polar.N1, polar.N2
    j = euler.j.value
    N = euler.N
    d = sec.delta

    def evaluate() -> float:
        log_value = 0.5 * (
            math.log(2.0 * j + d + 1.0)
            + ln_factorial(N1 + sec.m1)
            + ln_factorial(N2 + sec.m2)
            - ln_factorial(N1)
            - ln_factorial(N2)
            - ln_factorial(N / 2.0 - j)
            - ln_factorial(j - sec.m_plus)
            - ln_factorial(j + sec.m_minus + sec.delta2)
        )
        log_value += ln_factorial(N / 2.0 - sec.m_plus) - ln_factorial(sec.m1)
        log_value += 0.5 * (
            ln_factorial(j - sec.m_minus + sec.delta1)
            + ln_factorial(j + sec.m_plus + d)
            - ln_factorial(N / 2.0 + j + d)
        )
        series = hyp3f2_unit_terminating(
            -float(N1), -(j - sec.m_plus), j + sec.m_plus + d + 1.0, sec.m1 + 1.0, -N / 2.0 + sec.m_plus + 1.0
        )
        return math.exp(log_value) * series

    return _guarded(evaluate)


def printed_cg_arguments(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> tuple[float, float, float, float, float, float]:
    """Clebsch-Gordan arguments as printed: a = (N + 2 m_minus + 2 delta2 - 2)/4, b = (N - 2 m_minus + 2 delta1 - 2)/4."""
    N = euler.N
    a = (N + 2.0 * sec.m_minus + 2.0 * sec.delta2 - 2.0) / 4.0
    b = (N - 2.0 * sec.m_minus + 2.0 * sec.delta1 - 2.0) / 4.0
    alpha = (sec.m2 + polar.N2 - polar.N1) / 2.0
    beta = (sec.m1 + polar.N1 - polar.N2) / 2.0
    return a, alpha, b, beta, euler.j.value + sec.delta / 2.0, (sec.m1 + sec.m2) / 2.0


def printed_w_cg(polar: PolarQN, euler: EulerQN, sec: SectorParams) -> float:
    """(-1)^{N1} sigma C with the printed arguments."""
    sign = (-1.0 if polar.N1 % 2 else 1.0) * sector_phase(sec)
    return _guarded(lambda: sign * clebsch_gordan_continued(*printed_cg_arguments(polar, euler, sec)))


def printed_w_inverse(euler: EulerQN, polar: PolarQN, sec: SectorParams) -> float:
    """Inverse coefficient as printed, reading the lowercase n1 as N1."""
    N = euler.N
    a, _, b, _, c, gamma = printed_cg_arguments(polar, euler, sec)
    alpha = a - polar.N1
    beta = polar.N1 + abs(sec.M2) - (N - 2.0 * sec.m_minus - 2.0 * sec.delta1 - 2.0) / 4.0
    sign = (-1.0 if polar.N1 % 2 else 1.0) * sector_phase(sec)
    return _guarded(lambda: sign * clebsch_gordan_continued(a, alpha, b, beta, c, gamma))


def printed_angular_constant(j: HalfInt, sec: SectorParams) -> float:
    """N_jms as printed, without its phase."""
    jv = j.value
    d = sec.delta
    log_sq = (
        math.log(2.0 * jv + d + 2.0)
        + ln_factorial(jv - sec.m_plus)
        + ln_gamma(jv + sec.m_plus + d + 1.0)
        - math.log(16.0 * math.pi**2)
        - ln_gamma(jv + sec.m_minus + sec.delta1 + 1.0)
        - ln_gamma(jv - sec.m_minus + sec.delta2 + 1.0)
    )
    return math.exp(0.5 * log_sq)


def printed_radial_constant(N: int, j: HalfInt, sec: SectorParams, params: SystemParams) -> float:
    """C_Nj = 4 a^2 / Gamma(2j+delta+2) * sqrt(Gamma(N/2+j+delta+2) / (N/2-j)!)."""
    jv = j.value
    d = sec.delta
    log_value = (
        -ln_gamma(2.0 * jv + d + 2.0)
        + 0.5 * (ln_gamma(N / 2.0 + jv + d + 2.0) - ln_factorial(N / 2.0 - jv))
    )
    return 4.0 * params.a**2 * math.exp(log_value)


def printed_polar_constant(n_a: int, m_a: float, params: SystemParams) -> float:
    """sqrt(2 Gamma(n_a + m_a + 1) / n_a!) * a / Gamma(m_a + 1)."""
    log_value = 0.5 * (math.log(2.0) + ln_gamma(n_a + m_a + 1.0) - ln_factorial(n_a)) - ln_gamma(m_a + 1.0)
    return params.a * math.exp(log_value)


def printed_hypermomentum_constant(j: HalfInt, sec: SectorParams, params: SystemParams) -> float:
    """2 a^2 / (2j + delta + 2)."""
    return 2.0 * params.a**2 / (2.0 * j.value + sec.delta + 2.0)


def printed_omega_eigenvalue(polar: PolarQN, sec: SectorParams, params: SystemParams) -> float:
    """(2 mu omega / hbar)(2 N1 - 2 N2 - |M1| + |M2| - delta1 + delta2)."""
    return 2.0 * params.a**2 * (
        2.0 * polar.N1 - 2.0 * polar.N2 - abs(polar.M1) + abs(polar.M2) - sec.delta1 + sec.delta2
    )


def printed_potential_spheroidal(point: SpheroidalCoords, params: SystemParams) -> float:
    """Spheroidal potential with the printed harmonic term mu d^2 omega^2 (xi + eta) / 2."""
    d_sq = point.d**2
    value = params.mu * d_sq * params.omega**2 * (point.xi + point.eta) / 2.0
    value += 4.0 / d_sq * (
        (params.c1 / ((point.xi + 1.0) * (1.0 + point.eta)) if params.c1 else 0.0)
        + (params.c2 / ((point.xi - 1.0) * (1.0 - point.eta)) if params.c2 else 0.0)
    )
    return value


def _ledger_sectors(params_grid: Iterable[SystemParams], charges: Iterable[tuple[str, str]]) -> list[tuple[SystemParams, SectorParams]]:
    return [(p, sector(p, m, s)) for p in params_grid for m, s in charges]


DEFAULT_CHARGES = (("0", "0"), ("1/2", "1/2"), ("1/2", "-1/2"), ("1", "0"), ("0", "1"), ("1", "1"))
DEFAULT_COUPLINGS = (0.0, 0.5, 2.0)


def _deviation(printed: np.ndarray, reference: np.ndarray) -> tuple[Optional[float], int]:
    finite = np.isfinite(printed)
    undefined = int(printed.size - finite.sum())
    if not finite.any():
        return None, undefined
    return float(np.max(np.abs(printed[finite] - reference[finite]))), undefined


def typo_ledger(
    n_max: int = 6,
    r_values: tuple[float, ...] = (0.1, 1.0, 10.0),
    charges: Iterable[tuple[str, str]] = DEFAULT_CHARGES,
    couplings: Iterable[float] = DEFAULT_COUPLINGS,
) -> list[LedgerEntry]:
    """
    Compare every printed closed form against the corrected one on a fixed grid.

    The grid and the output ordering are deterministic, so identical
    arguments give an identical ledger.
    """
    params_grid = [SystemParams(c1=c1, c2=c2) for c1 in couplings for c2 in couplings]
    grid = _ledger_sectors(params_grid, list(charges))

    collected: dict[str, tuple[list[float], list[float]]] = {}

    def record(item: str, printed: float, reference: float) -> None:
        bucket = collected.setdefault(item, ([], []))
        bucket[0].append(printed)
        bucket[1].append(reference)

    ratios: dict[str, list[float]] = {"angular_constant": [], "radial_constant": [], "polar_constant": []}
    residuals: dict[str, list[float]] = {"u_recursion": [], "v_recursion": []}
    residual_undefined = {"u_recursion": 0, "v_recursion": 0}

    for params, sec in grid:
        for N in range(n_max + 1):
            cols = list_euler_states(N, sec)
            rows = list_polar_states(N, sec)
            if not cols:
                continue
            W = InterbasisCalculator.coefficient_table(N, sec, CoefficientMethod.THREE_F2).matrix
            for r, p in enumerate(rows):
                record("omega_eigenvalue", printed_omega_eigenvalue(p, sec, params), omega_eigenvalue(p, sec, params))
                for c, q in enumerate(cols):
                    record("w_3f2", printed_w_coeff(p, q, sec), W[r, c])
                    record("w_cg_arguments", printed_w_cg(p, q, sec), W[r, c])
                    record("w_inverse", printed_w_inverse(q, p, sec), W[r, c])

            for q in cols:
                ratios["angular_constant"].append(
                    printed_angular_constant(q.j, sec) / normalize_numeric(NormalizationKind.ANGULAR, sec, params, j=q.j)
                )
                ratios["radial_constant"].append(
                    printed_radial_constant(N, q.j, sec, params)
                    / normalize_numeric(NormalizationKind.RADIAL, sec, params, N=N, j=q.j)
                )
                record(
                    "hypermomentum_constant",
                    printed_hypermomentum_constant(q.j, sec, params),
                    hypermomentum_overlap(N, q.j, q.j, sec, params),
                )
                if q.j > sec.m_plus_half:
                    record(
                        "a_coeff",
                        SpheroidalSolver.a_coeff(q.j, N, sec),
                        SpheroidalSolver.a_coeff_derived(q.j, N, sec),
                    )
            for p in rows:
                ratios["polar_constant"].append(
                    printed_polar_constant(p.N1, sec.m1, params)
                    / normalize_numeric(NormalizationKind.POLAR, sec, params, n_a=p.N1, axis=1)
                )

            for method_item, printed_m, oracle_m in (
                (
                    "omega_matrix_euler",
                    SpheroidalSolver.omega_matrix_euler(N, sec, MatrixMethod.CLOSED_FORM),
                    SpheroidalSolver.omega_matrix_euler(N, sec, MatrixMethod.ORACLE),
                ),
                (
                    "lambda_matrix_polar",
                    SpheroidalSolver.lambda_matrix_polar(N, sec, MatrixMethod.CLOSED_FORM),
                    SpheroidalSolver.lambda_matrix_polar(N, sec, MatrixMethod.ORACLE),
                ),
            ):
                for printed_v, oracle_v in zip(printed_m.ravel(), oracle_m.ravel()):
                    record(method_item, float(printed_v), float(oracle_v))

            for R in r_values:
                report = SpheroidalSolver.recursion_residual(
                    SpheroidalSolver.solve_spheroidal(N, sec, R), RecursionSource.PRINTED
                )
                for key, values in (("u_recursion", report.u_residuals), ("v_recursion", report.v_residuals)):
                    for value in values:
                        if value is None:
                            residual_undefined[key] += 1
                        else:
                            residuals[key].append(value)

    entries = []
    for item, (printed, reference) in collected.items():
        measured, undefined = _deviation(np.array(printed), np.array(reference))
        entries.append(LedgerEntry(item=item, measured=measured, expected=0.0, undefined=undefined, detail="max |printed - corrected|"))
    for item, values in ratios.items():
        arr = np.array(values)
        entries.append(
            LedgerEntry(
                item=item,
                measured=float(arr.max()) if arr.size else None,
                expected=1.0,
                detail=f"printed/numeric ratio in [{arr.min():.15e}, {arr.max():.15e}]" if arr.size else "",
            )
        )
    for item, values in residuals.items():
        entries.append(
            LedgerEntry(
                item=item,
                measured=float(max(values)) if values else None,
                expected=0.0,
                undefined=residual_undefined[item],
                detail=f"max printed-coefficient residual over R in {list(r_values)}",
            )
        )
    free = SystemParams()
    point = SpheroidalCoords(xi=1.5, eta=0.25, alpha=0.5, gamma=1.0, d=2.0)
    entries.append(
        LedgerEntry(
            item="spheroidal_potential",
            measured=printed_potential_spheroidal(point, free) / potential(spheroidal_to_cartesian(point), free),
            expected=1.0,
            detail="printed harmonic term mu d^2 omega^2 (xi + eta)/2 over the Cartesian value",
        )
    )
    logger.info(f"Typo ledger: {len(entries)} items over {len(grid)} sectors, N <= {n_max}")
    return entries
