import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from qvortex import bessel


def test_first_zeros_frozen():
    assert bessel.bessel_zero(0, 1) == pytest.approx(2.404825557695773, abs=1e-13)
    assert bessel.bessel_zero(1, 1) == pytest.approx(3.831705970207512, abs=1e-13)
    assert bessel.bessel_zero(2, 3) == pytest.approx(11.619841172149059, abs=1e-12)
    assert bessel.bessel_zero(20, 50) == pytest.approx(186.63822688809296, abs=1e-11)


def test_zero_table_matches_scipy():
    for ell in (0, 1, 5, 20, 60):
        np.testing.assert_allclose(bessel.bessel_zeros(ell, 40), special.jn_zeros(ell, 40), rtol=0, atol=1e-11)


def test_sign_scan_oracle_agrees_with_newton():
    np.testing.assert_allclose(bessel.sign_scan_zeros(3, 10), bessel.bessel_zeros(3, 10), atol=1e-12)


def test_bessel_j_matches_scipy_across_regimes():
    x = np.concatenate([np.linspace(0.0, 2.0, 41), np.linspace(2.0, 300.0, 500), [2500.0, 1e4]])
    table = bessel.bessel_j_table(12, x)
    for ell in range(13):
        np.testing.assert_allclose(table[ell], special.jv(ell, x), rtol=0, atol=1e-13)


@given(st.integers(0, 30), st.integers(1, 30))
@settings(max_examples=40, deadline=None)
def test_zero_is_a_root_and_ordered(ell, k):
    z = bessel.bessel_zero(ell, k)
    assert abs(bessel.bessel_j(ell, z)) < 1e-13
    assert z > ell
    if k > 1:
        assert bessel.bessel_zero(ell, k - 1) < z


def test_interlacing_small_table():
    t = np.array([bessel.bessel_zeros(ell, 20) for ell in range(8)])
    assert np.all(t[:-1] < t[1:])
    assert np.all(t[1:, :-1] < t[:-1, 1:])


def test_large_k_asymptotics():
    res = bessel.asymptotic_zero_residuals(0, 50)
    # pi k - pi/4 is the leading McMahon term; the 3 pi / 4 variant is off by a half period
    assert abs(res["mcmahon_leading"]) < 1e-3
    assert res["offset_3pi4"] == pytest.approx(-math.pi, abs=2e-3)


def test_mcmahon_estimate_close_for_moderate_k():
    assert bessel.mcmahon_estimate(0, 10) == pytest.approx(bessel.bessel_zero(0, 10), abs=1e-9)


def test_i0_series():
    assert bessel.bessel_i0(0.0) == 1.0
    assert math.exp(-2.0) * bessel.bessel_i0(2.0) == pytest.approx(0.308508322553671, abs=1e-15)
    assert bessel.bessel_i0(5.0) == pytest.approx(special.i0(5.0), rel=1e-14)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        bessel.bessel_zero(-1, 1)
    with pytest.raises(ValueError):
        bessel.bessel_zeros(0, 0)
