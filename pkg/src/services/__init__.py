"""Services module."""

from src.services.coordinates import (
    cartesian_to_dp,
    cartesian_to_euler,
    cartesian_to_spheroidal,
    dp_from_euler,
    dp_to_cartesian,
    euler_from_dp,
    euler_to_cartesian,
    ks_map,
    potential,
    potential_spheroidal,
    spheroidal_to_cartesian,
)
from src.services.interbasis import InterbasisCalculator, orthogonality_defect
from src.services.oracle import (
    align_signs,
    matrix_element_numeric,
    overlap_polar_euler,
    quadrature_table,
)
from src.services.oscillator import (
    energy,
    enumerate_sectors,
    lambda_eigenvalue,
    level_degeneracy,
    list_euler_states,
    list_polar_states,
    omega_eigenvalue,
    omega_tilde,
    phi_polar,
    psi_euler,
    psi_polar,
    radial_R,
    sector,
)
from src.services.printed_forms import typo_ledger
from src.services.quadrature import ConvergenceError, golub_welsch, normalize_numeric, sturm_count, symtri_eigen
from src.services.specfun import DomainError, SeriesDivergenceError, clebsch_gordan_continued
from src.services.spheroidal import SpheroidalSolver, spectral_projectors
from src.services.verification import VerificationError, VerificationGrid, Verifier, assert_passed

__all__ = [
    "InterbasisCalculator",
    "SpheroidalSolver",
    "Verifier",
    "VerificationGrid",
    "VerificationError",
    "ConvergenceError",
    "DomainError",
    "SeriesDivergenceError",
    "assert_passed",
    "orthogonality_defect",
    "spectral_projectors",
    "typo_ledger",
    "clebsch_gordan_continued",
    "golub_welsch",
    "symtri_eigen",
    "sturm_count",
    "normalize_numeric",
    "quadrature_table",
    "overlap_polar_euler",
    "matrix_element_numeric",
    "align_signs",
    "sector",
    "energy",
    "enumerate_sectors",
    "level_degeneracy",
    "list_euler_states",
    "list_polar_states",
    "lambda_eigenvalue",
    "omega_tilde",
    "omega_eigenvalue",
    "radial_R",
    "phi_polar",
    "psi_euler",
    "psi_polar",
    "euler_to_cartesian",
    "dp_to_cartesian",
    "spheroidal_to_cartesian",
    "dp_from_euler",
    "euler_from_dp",
    "cartesian_to_dp",
    "cartesian_to_euler",
    "cartesian_to_spheroidal",
    "ks_map",
    "potential",
    "potential_spheroidal",
]
