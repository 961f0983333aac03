import math

import numpy as np
import pytest

from qvortex import hierarchy, spectrum
from qvortex.errors import DomainError, RangeError, SizeError
from qvortex.filament import FluidDomain


def test_time_scale_and_velocity():
    t = hierarchy.time_scale(2.0, 4.0 * math.pi)
    assert t == pytest.approx(4.0)
    assert hierarchy.loop_velocity(2.0, t, 3.0) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        hierarchy.time_scale(1.0, 0.0)


def test_t_max_frozen():
    dom = FluidDomain.from_sigma(1e-3, R0=10.0, R1=1000.0, Rf=1.0)
    assert hierarchy.t_max(dom) == pytest.approx(522548.11473310634, rel=1e-13)


def test_quantized_dispersion():
    dom = FluidDomain.from_sigma(1e-3, R0=10.0, R1=1000.0, Rf=1.0)
    assert hierarchy.quantized_dispersion((0, 1, 0, 1), 2, dom) == pytest.approx(0.06629256791471898, rel=1e-12)
    with pytest.raises(DomainError):
        hierarchy.quantized_dispersion((0, 1, 0, 1), 1, dom)


def test_uniform_grid_dimension_one():
    fit = hierarchy.box_counting_dimension(hierarchy.uniform_set(100000))
    assert fit.dimension == pytest.approx(1.0, abs=0.02)


def test_reciprocal_dimension_frozen():
    fit = hierarchy.box_counting_dimension(hierarchy.reciprocal_set(1, 100000))
    assert fit.dimension == pytest.approx(0.5100942689306514, abs=1e-9)
    assert fit.ci[0] < 0.51 < fit.ci[1]
    assert fit.r2 >= 0.995


def test_scale_invariance():
    v = hierarchy.reciprocal_set(1, 20000).values
    a = hierarchy.box_counting_dimension(v)
    b = hierarchy.box_counting_dimension(v * 1e6)
    assert a.dimension == pytest.approx(b.dimension, abs=1e-9)


def test_degenerate_and_small_sets():
    fit = hierarchy.box_counting_dimension(np.full(2000, 3.0))
    assert fit.degenerate and fit.dimension == 0.0
    with pytest.raises(SizeError):
        hierarchy.box_counting_dimension(np.arange(1.0, 10.0))


def test_box_counts_exact():
    counts = hierarchy.box_counts(np.array([0.0, 0.1, 0.5, 0.95]), [1.0, 0.5, 0.25])
    assert counts.tolist() == [1, 2, 3]


def test_gamma_slice_bounds():
    dom = FluidDomain.from_sigma(0.1, R0=10.0, R1=1000.0, Rf=1.0)
    sl = hierarchy.gamma_slice(dom, 0, 100)
    assert len(sl) == 101
    np.testing.assert_allclose(sl.values[-1], spectrum.circulation((0, 1, 0, 1), dom), rtol=1e-14)
    with pytest.raises(RangeError):
        hierarchy.gamma_slice(dom, 0, 10**5)


def test_report_json_keys():
    import json

    fit = hierarchy.box_counting_dimension(hierarchy.reciprocal_set(1, 5000))
    payload = json.loads(fit.to_json())
    assert {"dimension", "ci", "window", "r2", "n_points"} <= set(payload)
