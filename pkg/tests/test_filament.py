import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qvortex import filament
from qvortex.errors import ClosureError, ConstraintError, DomainError
from qvortex.filament import FluidDomain, RingState, TangentField


def test_domain_validation():
    with pytest.raises(DomainError, match="R0"):
        FluidDomain(R0=-1.0, R1=100.0, rho0=1.0, v0=1.0, Rf=0.1, hbar=1.0, mu0=1.0)
    with pytest.raises(DomainError, match="Rf"):
        FluidDomain(R0=1.0, R1=100.0, rho0=1.0, v0=1.0, Rf=2.0, hbar=1.0, mu0=1.0)
    with pytest.raises(DomainError, match="sigma_convention"):
        FluidDomain(R0=1.0, R1=100.0, rho0=1.0, v0=1.0, Rf=0.1, hbar=1.0, mu0=1.0, sigma_convention="x")


def test_thin_pipe_warning():
    with pytest.warns(UserWarning, match="thin-pipe"):
        FluidDomain(R0=1.0, R1=5.0, rho0=1.0, v0=1.0, Rf=0.1, hbar=1.0, mu0=1.0)


def test_from_sigma_roundtrip():
    for conv in ("Rf", "R0"):
        dom = FluidDomain.from_sigma(1e-3, R0=10.0, R1=1000.0, Rf=1.0, sigma_convention=conv)
        assert dom.sigma_ph == pytest.approx(1e-3, rel=1e-14)
    dom = FluidDomain.from_sigma(1e-3, R0=10.0, R1=1000.0, Rf=1.0)
    assert dom.mu0 == pytest.approx(1e6)
    assert dom.mu_tilde == 1.0


def test_circle_reconstructs_unit_circle_about_q():
    j = TangentField.circle(64, phi0=0.3)
    r = filament.reconstruct_curve(j, q=(1.0, -2.0, 0.5), R=2.0)
    xi = j.xi
    ref = np.array([1.0 + 2.0 * np.cos(xi + 0.3), -2.0 + 2.0 * np.sin(xi + 0.3), np.full(64, 0.5)])
    np.testing.assert_allclose(r, ref, atol=1e-13)


def test_open_tangent_rejected():
    s = TangentField.circle(32).samples.copy()
    s[2] += 1e-3
    with pytest.raises(ClosureError) as err:
        filament.reconstruct_curve(TangentField(s))
    assert err.value.component == "z"


def test_momentum_of_circle_frozen():
    p = filament.canonical_momentum(TangentField.circle(512), 1.0, 1.0, 1.0)
    np.testing.assert_allclose(p, [0.0, 0.0, math.pi], atol=1e-13)


@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.floats(0.0, 2 * math.pi))
@settings(max_examples=25, deadline=None)
def test_momentum_scaling(R, gamma, rho0, phi0):
    p = filament.canonical_momentum(TangentField.circle(128, phi0), R, gamma, rho0)
    assert p[2] == pytest.approx(math.pi * rho0 * R**2 * gamma, rel=1e-12)
    assert abs(p[0]) + abs(p[1]) < 1e-12 * p[2]


def test_momentum_rotates_with_curve():
    th = 0.4
    rot = np.array([[1, 0, 0], [0, math.cos(th), -math.sin(th)], [0, math.sin(th), math.cos(th)]])
    p = filament.canonical_momentum(TangentField.circle(128).rotated(rot), 1.0, 1.0, 1.0)
    np.testing.assert_allclose(p, rot @ [0.0, 0.0, math.pi], atol=1e-12)


def test_n1_modes_constrained():
    with pytest.raises(ConstraintError):
        TangentField.from_modes({1: 0.1}, 1e-3)


def test_transverse_mode_roundtrip():
    modes = {-3: 0.2 + 0.1j, 3: -0.05j, 2: 0.3}
    j = TangentField.from_modes(modes, 1e-2, n=64, phi0=0.7)
    back = j.transverse_modes(phi0=0.7, epsilon=1e-2)
    for n, c in modes.items():
        assert back[n] == pytest.approx(c, abs=1e-12)


def test_n1_response_sign():
    # first-order momentum change from the n = 1 pair is -2 pi rho0 R^2 Gamma eps j_-1
    phi, eps = 0.3 - 0.7j, 1e-5
    p0 = filament.canonical_momentum(TangentField.circle(256), 1.0, 1.0, 1.0)
    j = TangentField.from_modes({-1: phi, 1: -np.conj(phi)}, eps, 256, allow_n1=True)
    dp = filament.canonical_momentum(j, 1.0, 1.0, 1.0) - p0
    ratio = (dp[0] + 1j * dp[1]) / (-2 * math.pi * eps * phi)
    assert ratio == pytest.approx(1.0, abs=1e-9)


def test_oscillator_variables():
    v, c = filament.oscillator_vars(2.0, 0.0, 1.0, 0.5, 1.0)
    assert filament.radius_from_oscillator(v, c, 1.0) == pytest.approx(2.0)
    assert math.atan2(c, v) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        filament.oscillator_vars(0.5, 0.0, 1.0, 0.0, 1.0)


def test_circulation_from_state():
    dom = FluidDomain(R0=10.0, R1=1000.0, rho0=2.0, v0=1.0, Rf=1.0, hbar=1.0, mu0=1.0)
    st_ = RingState.ring(3.0, 1.0, 0.7, 2.0)
    gam = filament.circulation_from_state(st_.p, st_.varpi, st_.chi, dom)
    assert gam == pytest.approx(0.7, rel=1e-14)
    assert st_.circulation(2.0) == pytest.approx(0.7, rel=1e-14)
    with pytest.raises(DomainError):
        filament.circulation_from_state([0, 0, 0], 0.0, 0.0, dom)


def test_ring_state_invariants():
    with pytest.raises(ConstraintError):
        RingState(q=(0, 0, 0), p=(0, 0, 1), phi0=0.0, varpi=1.0, chi=0.0, R=1.0, Rf=1.0)
    with pytest.raises(ConstraintError):
        RingState.ring(1.0, 1.0, 1.0, 1.0, modes={1: 0.1})
    assert RingState.ring(1.0, 1.0, 1.0, 1.0, modes={2: 0.1}).modes == {2: 0.1}
