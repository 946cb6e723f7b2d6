"""Shock-frame formulation: a source moving at constant speed through a still medium.

In the solar-wind rest frame a shock started at ``x0 = -v_sh t0`` injects
particles at its current position ``v_sh t``. Moving to the frame of the shock
turns the problem into the stationary-source problem with advection speed
``a = v_sh`` and time shifted by ``t0``. The map is

    (x, t) -> (X, T, a) = (x - v_sh t, t + t0, v_sh).

Each quantity is available two ways: by composing the map with the
stationary-source routines, and by evaluating the closed forms written
directly in the original coordinates (boundary values ``(u +/- i0)^p``
realised with signed-zero complex arithmetic). The two must agree.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import series as _series
from . import specfun
from .series import SeriesMode, SeriesResult, TruncationPolicy
from .spectral import SymbolFamily, TransportParams
from .weakdiff import f_weak

__all__ = [
    "ShockParams",
    "to_solarwind_coords",
    "from_solarwind_coords",
    "solution_shock",
    "weak_shock",
]


@dataclass(frozen=True)
class ShockParams:
    """Shock speed, onset offset and the transport parameters (``a`` is set to ``v_sh``)."""

    v_sh: float
    t0: float
    base: TransportParams = field(default=None)

    def __post_init__(self):
        if not self.v_sh > 0.0:
            raise ValueError(f"shock speed must be positive, got {self.v_sh}")
        if not self.t0 >= 0.0:
            raise ValueError(f"t0 must be non-negative, got {self.t0}")
        if self.base is None:
            raise ValueError("ShockParams needs base transport parameters")
        object.__setattr__(self, "base", self.base.replace(a=self.v_sh))

    @classmethod
    def build(cls, lam, kappa, v_sh, t0=0.0):
        return cls(v_sh, t0, TransportParams(lam, kappa, v_sh))


def to_solarwind_coords(x_frame: float, t_frame: float, sp: ShockParams):
    """Evaluation point for the stationary-source solution.

    Returns ``(x - v_sh t, t + t0, v_sh)``.

    >>> to_solarwind_coords(0.0, 0.0, ShockParams.build(1.5, 0.1, 1.0, 2.0))
    (0.0, 2.0, 1.0)
    """
    return x_frame - sp.v_sh * t_frame, t_frame + sp.t0, sp.v_sh


def from_solarwind_coords(x_eval: float, t_eval: float, sp: ShockParams):
    """Inverse of :func:`to_solarwind_coords` (drops the advection speed)."""
    t = t_eval - sp.t0
    return x_eval + sp.v_sh * t, t


def _case(x_eval):
    return SymbolFamily.ONE_SIDED_RIGHT if x_eval > 0.0 else SymbolFamily.ONE_SIDED_LEFT


def _bv_power(u: float, p: float, side: float) -> complex:
    """``(u + i side 0)^p`` on the principal branch; ``side`` is +1 or -1."""
    return cmath.exp(p * cmath.log(complex(u, math.copysign(0.0, side))))


def _printed_term(lam, kappa, v, x, t, t0, n):
    """Term ``n`` of the printed shock-frame series, complex before the final real part."""
    big_t = t + t0
    u = x - v * t
    mu = lam * n + 1.0
    phase = math.pi * lam * n if u > 0.0 else 0.0
    log_pref = (n + 1) * math.log(big_t) + math.lgamma(mu) - math.lgamma(n + 1.0) - math.log(n + 1.0)
    if n:
        log_pref += n * math.log(kappa)
    # |u|^-mu goes into the prefactor; the boundary value keeps only its phase
    scale = math.exp(min(log_pref - mu * math.log(abs(u)), 700.0))
    out = 0j
    env = 0.0
    for side in (1.0, -1.0):
        zr = -v * big_t / u
        # -v T/(u + i side 0) sits on the side of sign(side * v T) when on the cut
        z = complex(zr, math.copysign(1e-300, side * v * big_t) if zr > 1.0 else 0.0)
        f = specfun.hyp2f1(mu, n + 1.0, n + 2.0, z)
        branch = _bv_power(u, -mu, side) * abs(u) ** mu if abs(mu * math.log(abs(u))) < 600 else (
            cmath.exp(-1j * side * math.pi * mu) if u < 0.0 else 1.0)
        out += side * cmath.exp(1j * side * phase) * branch * f
        env = max(env, abs(f))
    return (1j / (2.0 * math.pi)) * scale * out, scale * max(env, 1e-300) / math.pi


def solution_shock(sp: ShockParams, x: float, t: float,
                   policy: TruncationPolicy = TruncationPolicy(),
                   form: str = "composed") -> SeriesResult:
    """Series solution in solar-wind coordinates.

    ``form="composed"`` maps ``(x, t)`` to the stationary frame and calls
    :func:`fractransport.series.solution_series`; ``form="printed"`` sums
    the closed-form series written directly in ``(x, t)``. The case split
    follows the sign of ``x - v_sh t``, the position relative to the shock.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    x_eval, t_eval, _ = to_solarwind_coords(x, t, sp)
    if t_eval <= 0.0:
        raise ValueError("t + t0 must be positive")
    if form == "composed":
        return _series.solution_series(_case(x_eval), sp.base, x_eval, t_eval, policy)
    if form != "printed":
        raise ValueError(f"unknown form {form!r}")
    if x_eval == 0.0:
        raise ValueError("x = v_sh t is the shock position; no point value")
    if abs(x + sp.v_sh * sp.t0) < 1e-6 * (1.0 + sp.v_sh * t_eval):
        raise ValueError("x = -v_sh t0 is the singular line (guard band)")
    lam, kappa = sp.base.lam, sp.base.kappa

    f0, _ = _printed_term(lam, kappa, sp.v_sh, x, t, sp.t0, 0)
    if kappa == 0.0:
        return SeriesResult(f0.real, 1, 0.0, SeriesMode.CONVERGENT)

    def terms():
        n = 0
        while True:
            n += 1
            val, env = _printed_term(lam, kappa, sp.v_sh, x, t, sp.t0, n)
            yield val.real, env

    rest = _series._sum_terms(terms(), lam, policy)
    return SeriesResult(f0.real + rest.value, rest.n_used + 1, rest.smallest_term, rest.mode,
                        rest.roundoff + 4e-16 * abs(f0))


def weak_shock(sp: ShockParams, x: float, t: float, form: str = "printed",
               literal: bool = False) -> float:
    """Weak-diffusion profile in solar-wind coordinates.

    ``form="composed"`` is ``f_weak`` at the mapped point. ``form="printed"``
    evaluates the boundary-value closed form directly. That form multiplies
    the ``(x + v_sh t0 +/- i0)^-lam`` bracket by ``x + (lam - 1) v_sh t + lam v_sh t0``,
    which is what the substitution produces. ``literal=True`` uses ``v_sh t0``
    in place of ``lam v_sh t0`` instead, reproducing the coefficient exactly
    as it is commonly printed; the two agree only when ``t0 = 0``.
    """
    x_eval, t_eval, v = to_solarwind_coords(x, t, sp)
    if form == "composed":
        return f_weak(sp.base, x_eval, t_eval)
    if form != "printed":
        raise ValueError(f"unknown form {form!r}")
    if x_eval == 0.0 or x + v * sp.t0 == 0.0:
        raise ValueError("x = v_sh t and x = -v_sh t0 are excluded points")
    lam, kappa, t0 = sp.base.lam, sp.base.kappa, sp.t0
    sgn = lambda q: float(q > 0) - float(q < 0)
    f0 = (sgn(x + v * t0) - sgn(x - v * t)) / (2.0 * v)
    if kappa == 0.0 or lam == 2.0:
        return f0
    if lam == 1.0:
        raise ValueError("the printed weak form has a Gamma(lam - 1) pole at lam = 1")
    ph = cmath.exp(1j * math.pi * lam) if x_eval > 0.0 else 1.0 + 0j
    coef_t0 = v * t0 if literal else lam * v * t0
    lin = x + (lam - 1.0) * v * t + coef_t0
    front = x + v * t0
    bracket = lin * (ph * _bv_power(front, -lam, 1.0) - ph.conjugate() * _bv_power(front, -lam, -1.0))
    bracket += ph.conjugate() * _bv_power(x_eval, 1.0 - lam, -1.0) - ph * _bv_power(x_eval, 1.0 - lam, 1.0)
    f1 = -1j * kappa * specfun.gamma(lam - 1.0) / (2.0 * math.pi * v * v) * bracket
    return f0 + f1.real
