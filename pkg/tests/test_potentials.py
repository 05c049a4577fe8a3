import math

import numpy as np
import pytest

from qm1d import (
    Barrier,
    Harmonic,
    InfiniteWell,
    LinearRamp,
    PiecewiseConstant,
    Sampled,
    evaluate,
    make_grid,
    sample_on_grid,
)
from qm1d.errors import ConfigurationError, ParameterError


def test_barrier_evaluate():
    v = Barrier(v0=2.0, a=1.0)
    assert evaluate(v, 0.5) == 2.0
    assert evaluate(v, -0.5) == 0.0
    assert evaluate(v, 1.5) == 0.0
    # left-closed, right-open at the interfaces
    assert evaluate(v, 0.0) == 2.0
    assert evaluate(v, 1.0) == 0.0


def test_harmonic_evaluate():
    assert evaluate(Harmonic(omega=1.0, mass=1.0), 2.0) == 2.0
    assert evaluate(Harmonic(omega=2.0, mass=3.0), 1.0) == 6.0


def test_infinite_well_evaluate():
    v = InfiniteWell(a=1.0)
    assert evaluate(v, -0.1) == math.inf
    assert evaluate(v, 0.5) == 0.0
    assert evaluate(v, 1.1) == math.inf


def test_linear_ramp_evaluate():
    v = LinearRamp(lam=2.0)
    assert evaluate(v, 3.0) == 6.0
    assert evaluate(v, -1.0) == math.inf


def test_piecewise_convention_left_closed():
    v = PiecewiseConstant(segments=((0.0, 1.0, 5.0), (1.0, 2.0, -1.0)))
    assert evaluate(v, 0.0) == 5.0
    assert evaluate(v, 1.0) == -1.0
    assert evaluate(v, 2.0) == 0.0
    assert evaluate(v, 0.999) == 5.0


def test_piecewise_empty_is_free():
    v = PiecewiseConstant()
    assert evaluate(v, 12.3) == 0.0


def test_piecewise_rejects_bad_segments():
    with pytest.raises(ParameterError):
        PiecewiseConstant(segments=((0.0, 1.0, 1.0), (0.5, 2.0, 2.0)))
    with pytest.raises(ParameterError):
        PiecewiseConstant(segments=((1.0, 1.0, 1.0),))
    with pytest.raises(ParameterError):
        PiecewiseConstant(segments=((0.0, 1.0, math.inf),))


def test_parameter_validation():
    with pytest.raises(ParameterError):
        InfiniteWell(a=0.0)
    with pytest.raises(ParameterError):
        Barrier(v0=-1.0, a=1.0)
    with pytest.raises(ParameterError):
        Harmonic(omega=0.0)
    with pytest.raises(ParameterError):
        LinearRamp(lam=-2.0)


def test_sample_well_masks_endpoints():
    g = make_grid(0, 1, 11)
    values, mask = sample_on_grid(InfiniteWell(a=1.0), g)
    assert mask[0] and mask[-1]
    assert not mask[1:-1].any()
    assert np.all(values[1:-1] == 0.0)
    assert np.all(values[mask] == 0.0)


def test_sample_ramp_masks_origin():
    g = make_grid(0, 50, 101)
    values, mask = sample_on_grid(LinearRamp(lam=1.0), g)
    assert mask[0]
    assert not mask[1:].any()
    assert np.allclose(values[1:], g.points[1:])


def test_sampled_passthrough_on_own_grid():
    g = make_grid(-2, 2, 41)
    raw = np.cos(g.points)
    values, mask = sample_on_grid(Sampled(values=raw, grid=g), g)
    assert np.array_equal(values, raw)
    assert not mask.any()


def test_sampled_interpolates_elsewhere():
    g = make_grid(0, 1, 11)
    v = Sampled(values=g.points.copy(), grid=g)
    assert evaluate(v, 0.55) == pytest.approx(0.55)


def test_fully_masked_grid_rejected():
    g = make_grid(2, 3, 11)  # entirely outside the unit well
    with pytest.raises(ConfigurationError):
        sample_on_grid(InfiniteWell(a=1.0), g)


def test_harmonic_carries_its_own_mass():
    g = make_grid(-1, 1, 9)
    values, _ = sample_on_grid(Harmonic(omega=2.0, mass=0.5), g)
    assert values[0] == pytest.approx(0.5 * 0.5 * 4.0 * 1.0)
