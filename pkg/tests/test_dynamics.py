import math

import numpy as np
import pytest

from qvortex import dynamics, filament
from qvortex.errors import ConfigError, ConstraintError, DomainError, ResolutionError, SignalError
from qvortex.dynamics import EvolutionConfig, ModeSpectrum


def test_rates_and_coupling_frozen():
    assert dynamics.kelvin_rate(2) == pytest.approx(2.0 * math.sqrt(3.0), rel=1e-15)
    assert dynamics.kelvin_rate(-3) == pytest.approx(-3.0 * math.sqrt(8.0), rel=1e-15)
    assert dynamics.coupling_factor(2) == pytest.approx(-0.07179676972449123, rel=1e-13)
    assert dynamics.coupling_factor(3) == pytest.approx(-0.029437251522857366, rel=1e-13)
    # c_n -> -1/(4 n^2) for large n
    assert dynamics.coupling_factor(100) * 4e4 == pytest.approx(-1.0, rel=1e-3)


def test_mode_spectrum_constraints():
    ms = ModeSpectrum.from_minus_modes({2: 0.3 + 0.1j, 4: -0.2j}, M=8)
    ms.validate()
    assert ms.coupling_residual() < 1e-15
    with pytest.raises(ConstraintError):
        ModeSpectrum.from_minus_modes({1: 0.1}, M=8)
    bad = ms.coeffs.copy()
    bad[8 + 2] += 1e-3
    with pytest.raises(ConstraintError):
        ModeSpectrum(bad).validate()


def test_seeded_amplitude():
    ms = ModeSpectrum.seeded(3, amplitude=0.5, phase=0.2, M=8)
    assert abs(ms[3]) == pytest.approx(0.5)


def test_kelvin_evolve_period_and_drift():
    ms = ModeSpectrum.seeded(2, M=8)
    period = 2.0 * math.pi / dynamics.kelvin_rate(2)
    out = dynamics.kelvin_evolve(ms, period, 1.0, omega=0.3)
    np.testing.assert_allclose(out.coeffs, ms.coeffs, atol=1e-14)
    assert out.drift == pytest.approx(-0.3 * period)
    quarter = dynamics.kelvin_evolve(ms, 0.25 * period, 1.0, 0.0)
    assert quarter[2] == pytest.approx(1j * ms[2], abs=1e-14)
    assert quarter.coupling_residual() < 1e-14


def test_dispersion_matches_rate_in_units():
    # with R = 1 and Gamma = 4 pi the physical frequency equals the dimensionless rate
    assert dynamics.dispersion_omega(5, 1.0, 4 * math.pi, 1.0) == pytest.approx(dynamics.kelvin_rate(5))


def test_stability_guard():
    EvolutionConfig(dtau=1e-3, M=16).check_stability(1.0)
    with pytest.raises(ConfigError, match="stability"):
        EvolutionConfig(dtau=1e-3, M=32).check_stability(1.0)
    with pytest.raises(ConfigError):
        EvolutionConfig(dtau=-1.0)


def test_exact_ring_short_run():
    cfg = EvolutionConfig(dtau=1e-3, n_steps=200, M=8)
    r0 = dynamics.exact_ring(0.0, 64, 1.0, 1.0, 1e-3)
    tr = dynamics.integrate_lie(r0, cfg, 1.0, 1.0, 1e-3)
    err = max(np.max(np.abs(c - dynamics.exact_ring(t, 64, 1.0, 1.0, 1e-3))) for t, c in zip(tr.tau, tr.curves))
    assert err < 1e-12
    assert tr.max_closure_drift < 1e-14


def test_rhs_of_circle():
    r = dynamics.exact_ring(0.0, 32, 2.0, 1.0, 0.5)
    rhs = dynamics.lie_rhs(r, 2.0, 1.0, 0.5)
    xi = np.linspace(0.0, 2 * np.pi, 32, endpoint=False)
    ref = np.array([-0.5 * np.sin(xi), 0.5 * np.cos(xi), np.full(32, 2.0)])
    np.testing.assert_allclose(rhs, ref, atol=1e-13)


def test_resolution_guards():
    rng = np.random.default_rng(0)
    noisy = dynamics.exact_ring(0.0, 64, 1.0, 1.0, 0.0) + 1e-2 * rng.standard_normal((3, 64))
    with pytest.raises(ResolutionError):
        dynamics.integrate_lie(noisy, EvolutionConfig(dtau=1e-3, n_steps=1, M=8), 1.0, 0.0, 0.0)
    with pytest.raises(ResolutionError):
        dynamics.lie_rhs(np.zeros((3, 32)), 1.0, 0.0, 0.0)


def test_seeded_mode_frequency_short():
    ms = ModeSpectrum.seeded(3, M=8)
    curve = filament.reconstruct_curve(ms.to_tangent(1e-4, n=64))
    tr = dynamics.integrate_lie(curve, EvolutionConfig(dtau=1e-3, n_steps=200, M=8), 1.0, 1e-4, 0.0)
    rate = dynamics.measure_mode_frequency(tr, 3)
    assert rate == pytest.approx(dynamics.kelvin_rate(3), rel=1e-6)
    minus = dynamics.measure_mode_frequency(tr, -3, allow_constrained=True)
    assert minus == pytest.approx(-dynamics.kelvin_rate(3), rel=1e-6)
    with pytest.raises(DomainError):
        dynamics.measure_mode_frequency(tr, 1)


def test_empty_mode_has_no_signal():
    cfg = EvolutionConfig(dtau=1e-3, n_steps=5, M=8)
    tr = dynamics.integrate_lie(dynamics.exact_ring(0.0, 64, 1.0, 1.0, 0.0), cfg, 1.0, 1.0, 0.0)
    with pytest.raises(SignalError):
        dynamics.measure_mode_frequency(tr, 4)
