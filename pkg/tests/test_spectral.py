import math

import numpy as np
import pytest

from fractransport.spectral import (StabilityError, SymbolFamily, TransportParams,
                                    check_stability, green_cdf, green_quadrature, is_stable,
                                    solution_quadrature, solution_time_integral, symbol)


def test_symbol_examples():
    assert symbol("OneSidedRight", TransportParams(2.0, 1.0), 3.0) == -9
    assert symbol("OneSidedRight", TransportParams(1.0, 1.0), 3.0) == -3j
    assert abs(symbol("Riesz", TransportParams(1.5, 2.0), 4.0) + 16) < 1e-12


def test_symbol_families_are_mirror_images():
    p = TransportParams(1.3, 0.7)
    k = np.linspace(-5, 5, 11)
    assert np.allclose(symbol("OneSidedLeft", p, k), symbol("OneSidedRight", p, -k))
    assert np.allclose(symbol("OneSidedLeft", p, k), np.conj(symbol("OneSidedRight", p, k)))


def test_family_parsing():
    assert SymbolFamily.parse("right") is SymbolFamily.ONE_SIDED_RIGHT
    assert SymbolFamily.parse("one-sided-left") is SymbolFamily.ONE_SIDED_LEFT
    with pytest.raises(ValueError):
        SymbolFamily.parse("sideways")


def test_stability():
    assert is_stable("Riesz", TransportParams(0.5, 1.0))
    assert is_stable("OneSidedRight", TransportParams(1.5, 1.0))
    assert not is_stable("OneSidedRight", TransportParams(0.6, 1.0))
    with pytest.raises(StabilityError):
        check_stability("OneSidedLeft", TransportParams(0.6, 1.0))


def test_params_validation():
    for bad in ((0.0, 1.0), (2.5, 1.0), (1.5, -1.0)):
        with pytest.raises(ValueError):
            TransportParams(*bad)


def test_green_examples():
    assert abs(green_quadrature("Riesz", TransportParams(2.0, 1.0), 0.0, 1.0).value
               - 0.28209479177387814) < 1e-14
    assert abs(green_quadrature("OneSidedRight", TransportParams(2.0, 1.0), 0.0, 1.0).value
               - 0.28209479177387814) < 1e-14
    assert abs(green_quadrature("Riesz", TransportParams(1.0, 1.0), 0.0, 1.0).value
               - 1 / math.pi) < 1e-14


def test_one_sided_green_is_mirrored_and_positive():
    p = TransportParams(1.5, 0.5)
    for x in (-3.0, -0.4, 0.2, 2.5):
        r = green_quadrature("OneSidedRight", p, x, 1.0).value
        l = green_quadrature("OneSidedLeft", p, -x, 1.0).value
        assert abs(r - l) < 1e-13
        assert r > 0


def test_green_cdf_limits_and_derivative():
    p = TransportParams(1.5, 1.0)
    for fam in ("Riesz", "OneSidedRight", "OneSidedLeft"):
        lo = green_cdf(fam, p, -1e4, 1.0).value
        hi = green_cdf(fam, p, 1e4, 1.0).value
        assert lo < 1e-4 and hi > 1 - 1e-4
        h = 1e-3
        slope = (green_cdf(fam, p, 0.7 + h, 1.0).value - green_cdf(fam, p, 0.7 - h, 1.0).value) / (2 * h)
        assert abs(slope - green_quadrature(fam, p, 0.7, 1.0).value) < 1e-6
    assert abs(green_cdf("Riesz", p, 0.0, 1.0).value - 0.5) < 1e-12


def test_one_sided_unit_order_is_advection():
    p = TransportParams(1.0, 0.4, 0.6)
    assert abs(solution_quadrature("OneSidedRight", p, -0.5, 1.0).value - 1.0) < 1e-12
    assert solution_quadrature("OneSidedRight", p, 0.5, 1.0).value == 0.0
    assert solution_quadrature("OneSidedRight", p, -1.5, 1.0).value == 0.0


def test_solution_gaussian_time_integral():
    p = TransportParams(2.0, 1.0, 0.0)
    assert abs(solution_time_integral("Riesz", p, 0.0, 1.0).value - 1 / math.sqrt(math.pi)) < 1e-9
    assert solution_time_integral("Riesz", p, 0.3, 1e-300).value < 1e-100


def test_solution_methods_agree_on_grids():
    p = TransportParams(2.0, 0.1, 1.0)
    worst = max(abs(solution_quadrature("Riesz", p, x, 1.0).value
                    - solution_time_integral("Riesz", p, x, 1.0).value)
                for x in np.linspace(-3, 2, 21) if x not in (0.0, -1.0))
    assert worst < 1e-6
    p = TransportParams(1.7, 0.05, 1.0)
    for fam in ("OneSidedRight", "OneSidedLeft"):
        worst = max(abs(solution_quadrature(fam, p, x, 2.0).value
                        - solution_time_integral(fam, p, x, 2.0).value)
                    for x in np.linspace(-5, 3, 41) if x not in (0.0, -2.0))
        assert worst < 5e-6


def test_solution_near_source_is_finite_and_continuous():
    p = TransportParams(1.5, 0.1, 1.0)
    a = solution_quadrature("Riesz", p, 1e-12, 1.0).value
    b = solution_quadrature("Riesz", p, -1e-12, 1.0).value
    c = solution_time_integral("Riesz", p, 1e-12, 1.0).value
    assert abs(a - b) < 1e-6 and abs(a - c) < 1e-6


def test_time_must_be_positive():
    with pytest.raises(ValueError):
        green_quadrature("Riesz", TransportParams(1.5, 1.0), 0.0, 0.0)
