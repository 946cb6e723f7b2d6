"""Weak-diffusion approximation ``f = f0 + f1`` and its asymptotic regimes.

``f0`` is pure advection of the source. ``f1`` is the first-order correction in
``kappa``. Ahead of the source (``x > 0``) it comes from the right-sided
operator, behind it (``x < 0``) from the left-sided one. With
``C = kappa / (a^2 Gamma(2 - lam))``:

* ``x > 0``:               ``C [x^(1-lam) - (x + lam a t)(x + a t)^(-lam)]``
* ``x < 0, x + a t < 0``:  ``C [|x|^(1-lam) + (x + lam a t)|x + a t|^(-lam)]``
* ``x < 0, x + a t > 0``:  ``C |x|^(1-lam)``
"""
from __future__ import annotations

import enum
import math

from . import specfun
from .spectral import TransportParams

__all__ = [
    "Regime",
    "RegimeMismatchError",
    "f_zero",
    "f_one",
    "f_weak",
    "f_asymptotic",
    "regime_classify",
    "weak_coefficient",
]


class Regime(str, enum.Enum):
    FAR_UPSTREAM = "FarUpstream"
    NEAR_SOURCE_AHEAD = "NearSourceAhead"
    FAR_BEHIND = "FarBehind"
    BEHIND_INSIDE = "BehindInside"
    GENERAL = "General"


class RegimeMismatchError(ValueError):
    pass


def _sgn(v):
    return float(v > 0) - float(v < 0)


def _check_point(a, x, t):
    if a == 0.0:
        raise ValueError("the weak-diffusion expansion needs a != 0")
    if x == 0.0 or x + a * t == 0.0:
        raise ValueError("x = 0 and x = -a t are excluded points")


def f_zero(a: float, x: float, t: float) -> float:
    """Pure advection: ``(1/2a)[sgn(x + a t) - sgn(x)]``.

    >>> f_zero(2.0, -1.0, 1.0)
    0.5
    """
    _check_point(a, x, t)
    return (_sgn(x + a * t) - _sgn(x)) / (2.0 * a)


def weak_coefficient(params: TransportParams) -> float:
    """``kappa / (a^2 Gamma(2 - lam))``; zero at ``lam = 2`` where 1/Gamma has a zero."""
    return params.kappa * specfun.rgamma(2.0 - params.lam).real / params.a**2


def f_one(params: TransportParams, x: float, t: float) -> float:
    """First-order-in-kappa correction to the advected profile."""
    a, lam = params.a, params.lam
    _check_point(a, x, t)
    if a < 0.0:
        # mirror image: x -> -x, a -> -a swaps the two one-sided operators
        return f_one(params.replace(a=-a), -x, t)
    c = weak_coefficient(params)
    if c == 0.0:
        return 0.0
    front = x + a * t
    if x > 0.0:
        return c * (x ** (1.0 - lam) - (x + lam * a * t) * front ** (-lam))
    if front < 0.0:
        return c * (abs(x) ** (1.0 - lam) + (x + lam * a * t) * abs(front) ** (-lam))
    return c * abs(x) ** (1.0 - lam)


def f_weak(params: TransportParams, x: float, t: float) -> float:
    return f_zero(params.a, x, t) + f_one(params, x, t)


def regime_classify(x: float, t: float, a: float, threshold: float = 10.0) -> Regime:
    """Which limiting form applies; ``threshold`` quantifies "much greater than".

    Every point strictly inside the advected interval is ``BehindInside``
    because that form is exact there.
    """
    if not (a > 0.0 and t > 0.0):
        raise ValueError("regime classification needs a > 0 and t > 0")
    at = a * t
    if x > 0.0:
        if x >= threshold * at:
            return Regime.FAR_UPSTREAM
        if threshold * x <= at:
            return Regime.NEAR_SOURCE_AHEAD
        return Regime.GENERAL
    if x < 0.0:
        if x + at > 0.0:
            return Regime.BEHIND_INSIDE
        if -x >= threshold * at:
            return Regime.FAR_BEHIND
    return Regime.GENERAL


def f_asymptotic(params: TransportParams, x: float, t: float, regime,
                 threshold: float = 10.0) -> float:
    """Leading-order closed form of ``f_weak`` in the given regime.

    Raises :class:`RegimeMismatchError` if ``(x, t)`` is not in ``regime``
    under :func:`regime_classify` with the same ``threshold``.
    """
    regime = Regime(regime)
    actual = regime_classify(x, t, params.a, threshold)
    if regime is Regime.GENERAL or actual is not regime:
        raise RegimeMismatchError(f"point (x={x}, t={t}) is {actual.value}, not {regime.value}")
    lam, kappa, a = params.lam, params.kappa, params.a
    c = weak_coefficient(params)
    if regime in (Regime.FAR_UPSTREAM, Regime.FAR_BEHIND):
        # kappa t^2 / (2 Gamma(-lam) |x|^(lam+1)); 1/Gamma(-lam) vanishes at lam = 1, 2
        return kappa * t * t * specfun.rgamma(-lam).real / (2.0 * abs(x) ** (lam + 1.0))
    if regime is Regime.NEAR_SOURCE_AHEAD:
        return c * x ** (1.0 - lam)
    return 1.0 / a + c * abs(x) ** (1.0 - lam)
