import math
import warnings

import numpy as np
import pytest

from fractransport.fracderiv import (EdgeDecayError, SampledFunction, fractional_composition_check,
                                     pde_residual, riesz_derivative, spectral_derivative,
                                     spectral_multiplier)
from fractransport.spectral import TransportParams


def gaussian(x):
    return np.exp(-x * x)


def test_sampled_function_validation():
    with pytest.raises(ValueError):
        SampledFunction(np.arange(10.0), np.zeros(10))
    with pytest.raises(ValueError):
        SampledFunction(np.r_[np.arange(15.0), 20.0], np.zeros(16))
    with pytest.raises(ValueError):
        SampledFunction(np.arange(16.0), np.r_[np.zeros(15), np.nan])
    s = SampledFunction.from_callable(gaussian, -4.0, 4.0, 16)
    assert s.spacing == 0.5 and s.grid[-1] == 3.5


def test_riesz_near_second_derivative():
    r = riesz_derivative(gaussian, 1.999, 0.0)
    assert abs(r.value + 2.0) < 1e-2


@pytest.mark.parametrize("lam", [0.5, 1.5, 1.9])
def test_riesz_symbol(lam):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        r = riesz_derivative(lambda s: np.cos(2.0 * s), lam, 0.3)
    assert abs(r.value / math.cos(0.6) + 2.0**lam) < (1e-6 if lam > 1 else 1e-7 * 2.0**lam + 1e-7)


def test_riesz_constant_and_argument_checks():
    assert abs(riesz_derivative(lambda s: np.full_like(s, 3.0), 1.5, 0.2).value) < 1e-12
    for lam in (0.0, 1.0, 2.0):
        with pytest.raises(ValueError):
            riesz_derivative(gaussian, lam, 0.0)


def test_riesz_quadrature_matches_spectral():
    s = SampledFunction.from_callable(gaussian, -64.0, 64.0, 4096)
    spec = spectral_derivative(s, 1.5, "Riesz")
    for x in (0.0, 0.75, 2.0):
        i = int(np.argmin(np.abs(s.grid - x)))
        direct = riesz_derivative(gaussian, 1.5, float(s.grid[i])).value
        assert abs(direct - spec.values[i]) < 1e-5


def test_multiplier_values():
    k = np.array([-2.0, 0.0, 2.0])
    assert np.allclose(spectral_multiplier("OneSidedRight", 1, k), [-2j, 0, 2j])
    assert np.allclose(spectral_multiplier("OneSidedLeft", 1, k), [2j, 0, -2j])
    assert np.allclose(spectral_multiplier("Riesz", 1.5, k), [-2**1.5, 0, -2**1.5])
    assert np.allclose(spectral_multiplier("OneSidedRight", 0, k), [1, 1, 1])


def test_spectral_unit_order_on_periodic_sine():
    s = SampledFunction.from_callable(np.sin, 0.0, 16 * math.pi, 256)
    d = spectral_derivative(s, 1, "OneSidedRight", periodic=True)
    assert np.max(np.abs(d.values - np.cos(s.grid))) < 1e-6


def test_spectral_inverse_order_zero_mode():
    s = SampledFunction.from_callable(np.cos, 0.0, 8 * math.pi, 128)
    d = spectral_derivative(s, -1, "OneSidedRight", periodic=True)
    assert np.max(np.abs(d.values - np.sin(s.grid))) < 1e-10


def test_spectral_gaussian_second_derivative():
    s = SampledFunction.from_callable(gaussian, -16.0, 16.0, 512)
    d = spectral_derivative(s, 2, "OneSidedRight")
    assert np.max(np.abs(d.values - (4 * s.grid**2 - 2) * gaussian(s.grid))) < 1e-6


def test_edge_check():
    s = SampledFunction.from_callable(lambda x: 1 / np.cosh(x), -8.0, 8.0, 64)
    with pytest.raises(EdgeDecayError):
        spectral_derivative(s, 1.5, "Riesz")
    spectral_derivative(s, 1.5, "Riesz", periodic=True)


def test_complex_order_returns_complex():
    s = SampledFunction.from_callable(gaussian, -16.0, 16.0, 256)
    d = spectral_derivative(s, 0.5 + 0.3j, "OneSidedRight")
    assert np.iscomplexobj(d.values)


def test_composition():
    s = SampledFunction.from_callable(gaussian, -16.0, 16.0, 512)
    ref = np.max(np.abs(spectral_derivative(s, 1.5, "OneSidedRight").values))
    assert fractional_composition_check(s, 0.7, 0.8) <= 1e-8 * ref
    assert fractional_composition_check(s, 0.7, 0.8, "Riesz") <= 1e-8 * ref
    assert fractional_composition_check(s, 0.0, 1.3) < 1e-12
    # order -1 drops the zero mode, so only the mean is lost
    dev = fractional_composition_check(s, 1, -1)
    assert abs(dev - abs(s.values.mean())) < 1e-12


def test_residual_of_heat_kernel():
    p = TransportParams(2.0, 1.0, 0.0)
    grid = -16.0 + 32.0 * np.arange(512) / 512

    def heat(x, t):
        return math.exp(-x * x / (4 * t)) / math.sqrt(4 * math.pi * t)

    assert pde_residual(p, "Riesz", heat, grid, 1.0, 1e-3, guard=0.0, mollifier=0.0) < 1e-4


def test_residual_of_weak_profile_scales_with_kappa():
    grid = -16.0 + 32.0 * np.arange(256) / 256
    from fractransport.weakdiff import f_weak

    out = []
    for kappa in (0.02, 0.01):
        p = TransportParams(1.6, kappa, 1.0)

        def ev(x, t, p=p):
            return 0.0 if x == 0.0 or x + t == 0.0 else f_weak(p, x, t)

        out.append(pde_residual(p, "OneSidedRight", ev, grid, 2.0, 1e-3, guard=2.0))
    assert out[1] < out[0]


def test_residual_argument_checks():
    p = TransportParams(1.5, 0.1, 1.0)
    grid = np.linspace(-1, 1, 16, endpoint=False)
    with pytest.raises(ValueError):
        pde_residual(p, "Riesz", lambda x, t: 0.0, grid, 1.0, 2.0)
    with pytest.raises(ValueError):
        pde_residual(p, "Riesz", lambda x, t: 0.0, np.linspace(-1, 1, 20), 1.0, 1e-3)
