"""Unit tests for sectors, spectra, state lists and wavefunctions."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.models.coordinate_models import EulerCoords
from src.models.quantum_models import EulerQN, HalfInt, PolarQN, SystemParams
from src.services.coordinates import dp_from_euler
from src.services.oscillator import (
    angular_theta,
    energy,
    enumerate_sectors,
    lambda_eigenvalue,
    level_degeneracy,
    list_euler_states,
    list_polar_states,
    multiplet_size,
    omega_eigenvalue,
    omega_tilde,
    phi_polar,
    psi_euler,
    psi_polar,
    radial_R,
    sector,
    sector_phase,
)
from src.services.specfun import DomainError


class TestSector:
    """Test sector construction and singularity shifts."""

    def test_free_sector(self):
        """Test c = 0 gives zero shifts and m_a = |M_a|."""
        sec = sector(SystemParams(), "3/2", "-1/2")
        assert (sec.M1, sec.M2) == (1, 2)
        assert sec.delta1 == 0.0 and sec.delta2 == 0.0
        assert (sec.m1, sec.m2) == (1.0, 2.0)
        assert sec.m_plus == 1.5
        assert sec.m_minus == -0.5

    def test_shift(self):
        """Test delta = sqrt(M^2 + 2 mu c / hbar^2) - |M|."""
        sec = sector(SystemParams(c1=1.5, c2=4.0), "1/2", "1/2")
        assert sec.delta1 == pytest.approx(1.0)
        assert sec.delta2 == pytest.approx(math.sqrt(8.0))
        assert sec.delta == pytest.approx(1.0 + math.sqrt(8.0))

    def test_shift_small_coupling(self):
        """Test the shift keeps full precision for tiny couplings."""
        sec = sector(SystemParams(c1=1e-14), 3, 0)
        assert sec.delta1 == pytest.approx(2e-14 / 6.0, rel=1e-10)

    def test_invalid_sector(self):
        """Test m + s must be an integer."""
        with pytest.raises(ValueError):
            sector(SystemParams(), "1/2", 0)

    def test_phase(self):
        """Test the phase is -1 only for positive odd m - s."""
        assert sector_phase(sector(SystemParams(), "1/2", "-1/2")) == -1.0
        assert sector_phase(sector(SystemParams(), "-1/2", "1/2")) == 1.0
        assert sector_phase(sector(SystemParams(), 1, -1)) == 1.0


class TestSpectrum:
    """Test energies, degeneracies and operator eigenvalues."""

    def test_energy(self):
        """Test E_N = hbar omega (N + delta1 + delta2 + 2)."""
        params = SystemParams(omega=2.0, hbar=0.5, c1=1.5)
        sec = sector(params, 0, 0)
        assert energy(params, 3, sec) == pytest.approx(1.0 * (3 + sec.delta + 2.0))

    def test_energy_free(self):
        """Test the free oscillator levels."""
        free = SystemParams()
        for N in range(6):
            for sec in enumerate_sectors(N, free):
                assert energy(free, N, sec) == N + 2.0

    def test_energy_negative_level(self):
        """Test N < 0 is refused."""
        with pytest.raises(DomainError):
            energy(SystemParams(), -1, sector(SystemParams(), 0, 0))

    def test_degeneracy(self):
        """Test the four-dimensional oscillator degeneracy."""
        for N in range(8):
            assert level_degeneracy(N, SystemParams()) == (N + 1) * (N + 2) * (N + 3) // 6

    def test_enumerate_sectors(self):
        """Test the sectors of the first excited level."""
        labels = {(sec.M1, sec.M2) for sec in enumerate_sectors(1, SystemParams())}
        assert labels == {(-1, 0), (0, -1), (0, 1), (1, 0)}

    def test_multiplet_size(self):
        """Test empty and nonempty multiplets."""
        sec = sector(SystemParams(), "1/2", "1/2")
        assert multiplet_size(0, sec) == 0
        assert multiplet_size(2, sec) == 0
        assert multiplet_size(5, sec) == 3

    def test_lambda_and_omega(self):
        """Test lambda = (j + delta/2)(j + delta/2 + 1) and Omega~ = 2(N1 - N2) + m1 - m2."""
        params = SystemParams(mu=2.0, c2=0.5)
        sec = sector(params, 0, 0)
        assert lambda_eigenvalue(HalfInt.of(1), sec) == pytest.approx((1 + sec.delta / 2) * (2 + sec.delta / 2))
        polar = PolarQN(N1=2, N2=0, M1=0, M2=0)
        assert omega_tilde(polar, sec) == pytest.approx(4.0 - sec.delta2)
        assert omega_eigenvalue(polar, sec, params) == pytest.approx(2.0 * params.a**2 * (4.0 - sec.delta2))


class TestStateLists:
    """Test the ordering of basis states."""

    def test_euler_states(self):
        """Test j runs from m_plus to N/2."""
        sec = sector(SystemParams(), "1/2", "1/2")
        states = list_euler_states(5, sec)
        assert [str(q.j) for q in states] == ["1/2", "3/2", "5/2"]
        assert all(q.N == 5 and q.m == sec.m and q.s == sec.s for q in states)

    def test_polar_states(self):
        """Test N1 ascends and N2 descends."""
        sec = sector(SystemParams(), 0, 0)
        states = list_polar_states(4, sec)
        assert [(p.N1, p.N2) for p in states] == [(0, 2), (1, 1), (2, 0)]
        assert all(p.N == 4 for p in states)

    def test_empty(self):
        """Test an odd remainder gives no states."""
        sec = sector(SystemParams(), 0, 0)
        assert list_euler_states(3, sec) == []
        assert list_polar_states(3, sec) == []


class TestAngular:
    """Test the angular factor."""

    def test_ground_value(self):
        """Test the j = 0 function is the constant 1/(pi sqrt 2)."""
        sec = sector(SystemParams(), 0, 0)
        q = EulerQN(N=0, j=HalfInt.of(0), m=HalfInt.of(0), s=HalfInt.of(0))
        for beta in (0.0, 0.4, math.pi):
            assert angular_theta(beta, q, sec) == pytest.approx(1.0 / (math.pi * math.sqrt(2.0)))

    def test_endpoints_are_limits(self):
        """Test beta = 0 and beta = pi agree with nearby interior values."""
        sec = sector(SystemParams(c2=0.0), "1/2", "1/2")
        q = EulerQN(N=5, j=HalfInt.of("5/2"), m=sec.m, s=sec.s)
        assert angular_theta(0.0, q, sec) == pytest.approx(angular_theta(1e-9, q, sec), rel=1e-6)
        assert angular_theta(math.pi, q, sec) == 0.0
        assert abs(angular_theta(math.pi - 1e-9, q, sec)) < 1e-6

    def test_array(self):
        """Test vectorized evaluation matches scalar evaluation."""
        sec = sector(SystemParams(c1=0.5, c2=2.0), 1, 0)
        q = EulerQN(N=4, j=HalfInt.of(2), m=sec.m, s=sec.s)
        beta = np.linspace(0.1, 3.0, 7)
        assert np.allclose(angular_theta(beta, q, sec), [angular_theta(float(b), q, sec) for b in beta])

    def test_invalid(self):
        """Test out-of-range angles and foreign states."""
        sec = sector(SystemParams(), 0, 0)
        q = EulerQN(N=0, j=HalfInt.of(0), m=HalfInt.of(0), s=HalfInt.of(0))
        with pytest.raises(DomainError):
            angular_theta(-0.1, q, sec)
        other = EulerQN(N=1, j=HalfInt.of("1/2"), m=HalfInt.of("1/2"), s=HalfInt.of("1/2"))
        with pytest.raises(DomainError):
            angular_theta(0.5, other, sec)


class TestRadial:
    """Test the radial factors."""

    def test_radial_normalized(self):
        """Test integral u^3 R^2 du = 1."""
        params = SystemParams(mu=1.3, c1=0.5, c2=2.0)
        sec = sector(params, "1/2", "-1/2")
        value, _ = integrate.quad(
            lambda u: u**3 * radial_R(u, 5, "3/2", sec, params) ** 2, 0.0, np.inf, limit=200, epsabs=1e-13, epsrel=1e-12
        )
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_phi_normalized(self):
        """Test integral Phi^2 rho d rho = 1."""
        params = SystemParams(omega=0.7)
        value, _ = integrate.quad(
            lambda r: r * phi_polar(r, 2, 1, 0.3, params) ** 2, 0.0, np.inf, limit=200, epsabs=1e-13, epsrel=1e-12
        )
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_radial_array(self):
        """Test vectorized radial evaluation."""
        params = SystemParams()
        sec = sector(params, 0, 0)
        u = np.array([0.0, 0.5, 1.5])
        assert np.allclose(radial_R(u, 4, 1, sec, params), [radial_R(float(x), 4, 1, sec, params) for x in u])

    def test_radial_invalid(self):
        """Test inadmissible j and negative radius."""
        params = SystemParams()
        sec = sector(params, 0, 0)
        with pytest.raises(DomainError):
            radial_R(1.0, 2, 2, sec, params)
        with pytest.raises(DomainError):
            radial_R(-1.0, 2, 1, sec, params)
        with pytest.raises(DomainError):
            phi_polar(1.0, -1, 0, 0.0, params)


class TestGroundState:
    """Test the two bases share the ground state."""

    def test_ground_state_agrees(self):
        """Test |psi_euler| = |psi_polar| for N = 0."""
        params = SystemParams(c1=0.5, c2=2.0)
        sec = sector(params, 0, 0)
        q = list_euler_states(0, sec)[0]
        p = list_polar_states(0, sec)[0]
        point = EulerCoords(u=0.9, alpha=1.1, beta=1.3, gamma=2.0)
        assert abs(psi_euler(point, q, sec, params)) == pytest.approx(
            abs(psi_polar(dp_from_euler(point), p, sec, params)), rel=1e-10
        )
