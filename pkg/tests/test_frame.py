import numpy as np
import pytest

from fractransport.frame import (ShockParams, from_solarwind_coords, solution_shock,
                                 to_solarwind_coords, weak_shock)
from fractransport.series import solution_series
from fractransport.spectral import TransportParams
from fractransport.weakdiff import f_weak


def test_coordinate_map():
    sp = ShockParams.build(1.5, 0.1, 1.0, 2.0)
    assert to_solarwind_coords(0.0, 0.0, sp) == (0.0, 2.0, 1.0)
    x_e, t_e, _ = to_solarwind_coords(3.0, 1.5, sp)
    assert from_solarwind_coords(x_e, t_e, sp) == (3.0, 1.5)


def test_invalid_shock_params():
    with pytest.raises(ValueError):
        ShockParams.build(1.5, 0.1, 0.0)
    with pytest.raises(ValueError):
        ShockParams.build(1.5, 0.1, 1.0, -1.0)


def test_printed_sum_equals_substituted_sum():
    sp = ShockParams.build(1.5, 0.05, 1.0, 1.0)
    a = solution_shock(sp, 2.0, 0.5).value
    b = solution_shock(sp, 2.0, 0.5, form="printed").value
    assert abs(a - b) < 1e-12
    ref = solution_series("OneSidedRight", TransportParams(1.5, 0.05, 1.0), 1.5, 1.5).value
    assert a == ref


def test_zero_diffusivity():
    sp = ShockParams.build(1.5, 0.0, 1.0, 1.0)
    assert weak_shock(sp, 0.5, 1.0) == 1.0
    for x in (-3.0, -0.5, 0.5, 3.0):
        f0 = (np.sign(x + 1.0) - np.sign(x - 1.0)) / 2.0
        assert solution_shock(sp, x, 1.0, form="printed").value == pytest.approx(f0, abs=1e-13)


def test_weak_forms_agree_and_reduce_without_offset():
    for t0 in (0.0, 0.7):
        sp = ShockParams.build(1.6, 0.03, 2.0, t0)
        for x in np.linspace(-3.0, 5.0, 17):
            if abs(x - 1.0) < 1e-12 or abs(x + 2.0 * t0) < 1e-12:
                continue
            assert abs(weak_shock(sp, x, 0.5) - weak_shock(sp, x, 0.5, form="composed")) < 1e-12
    sp = ShockParams.build(1.5, 0.1, 1.0)
    assert weak_shock(sp, 3.0, 1.0) == pytest.approx(f_weak(sp.base, 2.0, 1.0), abs=1e-14)


def test_literal_coefficient_differs_only_with_offset():
    sp0 = ShockParams.build(1.5, 0.1, 1.0, 0.0)
    assert weak_shock(sp0, 3.0, 1.0, literal=True) == pytest.approx(weak_shock(sp0, 3.0, 1.0), abs=1e-15)
    sp = ShockParams.build(1.5, 0.1, 1.0, 0.5)
    assert abs(weak_shock(sp, -2.0, 1.0, literal=True) - weak_shock(sp, -2.0, 1.0)) > 1e-4


def test_shock_position_is_excluded():
    sp = ShockParams.build(1.5, 0.1, 1.0, 0.5)
    with pytest.raises(ValueError):
        solution_shock(sp, 1.0, 1.0, form="printed")
    with pytest.raises(ValueError):
        weak_shock(sp, -0.5, 1.0)
