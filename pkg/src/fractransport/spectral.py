"""Fourier-inversion evaluation of the propagator G(x, t) and the solution f(x, t).

Convention: ``G(x, t) = (1/2pi) * int exp(t * symbol(k)) exp(-i k x) dk`` so
that a spatial derivative corresponds to multiplication by ``-ik``. The
propagator solves ``dG/dt = kappa * D^lam G`` and the solution solves
``df/dt = kappa * D^lam f + a * df/dx + delta(x)`` with ``f(x, 0) = 0``, which
gives ``f(x, t) = int_0^t G(x + a t', t') dt'``.

Every inverse transform is written as ``(1/pi) Re int_0^inf`` using Hermitian
symmetry of the symbol. The propagator integral is taken along a rotated ray
in the complex k plane whenever that adds exponential decay; the solution
kernel is integrated on the real axis up to the point where ``exp(s t)`` has
died out, and the algebraic tail ``-1/s`` is handed to QUADPACK's Fourier
integrator.

One-sided operators with ``lam < 1`` have a growing real part in the symbol,
so the Fourier integral does not exist. For them the propagator and solution
are defined by analytic continuation through a Hankel-type representation,
which is exactly the function summed by the power series in
:mod:`fractransport.series`.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from ._quad import QuadratureError, adaptive_gl, graded_edges

__all__ = [
    "SymbolFamily",
    "TransportParams",
    "EvalResult",
    "StabilityError",
    "QuadratureError",
    "symbol",
    "is_stable",
    "check_stability",
    "green_quadrature",
    "green_cdf",
    "solution_quadrature",
    "solution_time_integral",
]

# exp(-_DECAY) is treated as zero
_DECAY = 46.0


class SymbolFamily(str, enum.Enum):
    """Which fractional operator appears in the transport equation."""

    ONE_SIDED_RIGHT = "OneSidedRight"
    ONE_SIDED_LEFT = "OneSidedLeft"
    RIESZ = "Riesz"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == key or member.name.replace("_", "").lower() == key:
                return member
        aliases = {"right": cls.ONE_SIDED_RIGHT, "left": cls.ONE_SIDED_LEFT}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown symbol family {value!r}")


class StabilityError(ValueError):
    """The symbol has a positive real part, so the propagator grows."""


@dataclass(frozen=True)
class TransportParams:
    """Fractional order ``lam`` in (0, 2], diffusivity ``kappa`` and advection speed ``a``."""

    lam: float
    kappa: float
    a: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.lam <= 2.0):
            raise ValueError(f"lambda must lie in (0, 2], got {self.lam}")
        if not self.kappa >= 0.0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if not math.isfinite(self.a):
            raise ValueError("advection speed must be finite")

    def replace(self, **changes) -> "TransportParams":
        data = {"lam": self.lam, "kappa": self.kappa, "a": self.a}
        data.update(changes)
        return TransportParams(**data)


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_err_estimate: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_err_estimate", float(self.abs_err_estimate))

    def __float__(self):
        return float(self.value)


def symbol(family, params: TransportParams, k):
    """Fourier symbol of ``kappa * D^lam`` at real wavenumber(s) ``k``.

    Examples
    --------
    >>> symbol(SymbolFamily.ONE_SIDED_RIGHT, TransportParams(2.0, 1.0), 3.0)
    (-9+0j)
    """
    family = SymbolFamily.parse(family)
    k = np.asarray(k, dtype=float)
    lam, kappa = params.lam, params.kappa
    mag = kappa * np.abs(k) ** lam
    if family is SymbolFamily.RIESZ:
        out = -mag + 0j
    else:
        sign = -1.0 if family is SymbolFamily.ONE_SIDED_RIGHT else 1.0
        phase = sign * 0.5 * lam * np.sign(k)
        out = mag * (_cospi(phase) + 1j * _sinpi(phase))
    return out[()] if out.ndim == 0 else out


def _cospi(x):
    # exact zeros at half-integers keep lam = 1 and lam = 2 symbols clean
    x = np.asarray(x, dtype=float)
    r = np.mod(x, 2.0)
    out = np.cos(np.pi * r)
    out = np.where(np.isclose(r, 0.5, rtol=0, atol=1e-15) | np.isclose(r, 1.5, rtol=0, atol=1e-15), 0.0, out)
    return out


def _sinpi(x):
    x = np.asarray(x, dtype=float)
    r = np.mod(x, 2.0)
    out = np.sin(np.pi * r)
    out = np.where(np.isclose(r, 0.0, rtol=0, atol=1e-15) | np.isclose(r, 1.0, rtol=0, atol=1e-15)
                   | np.isclose(r, 2.0, rtol=0, atol=1e-15), 0.0, out)
    return out


def is_stable(family, params: TransportParams, n_samples: int = 10_000) -> bool:
    """Sampled check that ``Re symbol(k) <= 0`` on log-spaced wavenumbers.

    The tolerance is relative (``1e-12 * |symbol|``) so that rounding in
    ``cos(pi lam / 2)`` at ``lam = 1`` does not count as growth.
    """
    k = np.logspace(-6, 6, n_samples)
    k = np.concatenate([-k[::-1], k])
    s = symbol(family, params, k)
    return bool(np.all(s.real <= 1e-12 * np.abs(s)))


def check_stability(family, params: TransportParams) -> None:
    if not is_stable(family, params):
        raise StabilityError(
            f"{SymbolFamily.parse(family).value} symbol with lambda={params.lam} "
            "has a positive real part; the Fourier integral diverges"
        )


def _validate_time(t):
    if not (t > 0.0 and math.isfinite(t)):
        raise ValueError(f"t must be positive and finite, got {t}")


def _one_sided(family):
    return family in (SymbolFamily.ONE_SIDED_RIGHT, SymbolFamily.ONE_SIDED_LEFT)


def _needs_continuation(family, params):
    return _one_sided(family) and params.lam < 1.0


# --------------------------------------------------------------------------
# propagator
# --------------------------------------------------------------------------


def _ray_angle(family, lam, x):
    """Rotation angle psi (k = r e^{i psi}) that keeps the integrand decaying."""
    if x == 0.0:
        return 0.0
    if family is SymbolFamily.RIESZ:
        return -min(0.25 * math.pi / lam, 0.25 * math.pi)
    # family is the right-sided operator here (left is mirrored by the caller)
    if x > 0.0:
        bound = min(0.5 * math.pi, 1.5 * math.pi / lam - 0.5 * math.pi)
        return -0.5 * bound
    bound = 0.5 * math.pi - 0.5 * math.pi / lam
    return 0.5 * bound if bound > 0.0 else 0.0


def _green_ray(family, params, x, t, tol):
    lam = params.lam
    kt = params.kappa * t
    psi = _ray_angle(family, lam, x)
    e_psi = complex(math.cos(psi), math.sin(psi))
    if family is SymbolFamily.RIESZ:
        coef = -kt * complex(math.cos(lam * psi), math.sin(lam * psi))
    else:
        ang = lam * psi - 0.5 * math.pi * lam
        coef = kt * complex(math.cos(ang), math.sin(ang))
    lin = -1j * x * e_psi

    def integrand(r):
        return (np.exp(coef * r**lam + lin * r) * e_psi).real

    decay_pow = -coef.real
    decay_lin = -lin.real
    if decay_pow <= 0.0 and decay_lin <= 0.0:
        raise StabilityError("no decaying direction for the propagator integral")
    uppers = []
    if decay_pow > 0.0:
        uppers.append((_DECAY / decay_pow) ** (1.0 / lam))
    if decay_lin > 0.0:
        uppers.append(_DECAY / decay_lin)
    upper = min(uppers)
    scale = kt ** (-1.0 / lam) if kt > 0 else upper
    osc = abs((lin * 1j).real)
    period = 2.0 * math.pi / osc if osc > 0 else None
    edges = graded_edges(upper, min(scale, upper), period)
    val, err = adaptive_gl(integrand, edges, tol * math.pi)
    return EvalResult(val / math.pi, err / math.pi + 1e-16 * abs(val))


def _green_hankel(params, x, t, tol):
    """Right-sided continuation for lam < 1 (zero for x <= 0)."""
    if x <= 0.0:
        return EvalResult(0.0, 0.0)
    lam = params.lam
    kt = params.kappa * t
    c, s = math.cos(math.pi * lam), math.sin(math.pi * lam)

    def integrand(y):
        yl = y**lam
        return np.exp(-x * y + kt * c * yl) * np.sin(kt * s * yl)

    upper = _DECAY / x
    if c < 0.0 and kt > 0.0:
        upper = min(upper, (_DECAY / (kt * -c)) ** (1.0 / lam))
    scale = min(1.0 / x, upper)
    edges = graded_edges(upper, scale)
    val, err = adaptive_gl(integrand, edges, tol * math.pi)
    return EvalResult(-val / math.pi, err / math.pi)


def green_quadrature(family, params: TransportParams, x: float, t: float,
                     tol: float = 1e-12) -> EvalResult:
    """Propagator G(x, t) by numerical Fourier inversion.

    Advection is not part of the propagator; see :func:`solution_quadrature`.

    Examples
    --------
    >>> r = green_quadrature("Riesz", TransportParams(2.0, 1.0), 0.0, 1.0)
    >>> round(r.value, 12)
    0.282094791774
    """
    family = SymbolFamily.parse(family)
    _validate_time(t)
    x = float(x)
    if params.kappa == 0.0:
        raise ValueError("kappa = 0 gives a delta propagator; no pointwise value")
    if family is SymbolFamily.ONE_SIDED_LEFT:
        return green_quadrature(SymbolFamily.ONE_SIDED_RIGHT, params, -x, t, tol)
    lam = params.lam
    if lam == 2.0:
        d = 4.0 * params.kappa * t
        return EvalResult(math.exp(-x * x / d) / math.sqrt(math.pi * d), 0.0)
    if lam == 1.0:
        kt = params.kappa * t
        if family is SymbolFamily.RIESZ:
            return EvalResult(kt / (math.pi * (x * x + kt * kt)), 0.0)
        raise ValueError("one-sided lambda = 1 propagator is the shifted delta(x + kappa t)")
    if family is SymbolFamily.ONE_SIDED_RIGHT and lam < 1.0:
        return _green_hankel(params, x, t, tol)
    if family is SymbolFamily.RIESZ:
        x = abs(x)
    return _green_ray(family, params, x, t, tol)


def green_cdf(family, params: TransportParams, x: float, t: float,
              tol: float = 1e-12) -> EvalResult:
    """Cumulative distribution ``int_{-inf}^x G(y, t) dy`` via Gil-Pelaez inversion.

    Only defined where the propagator is a probability density, i.e. for
    stable symbols.
    """
    family = SymbolFamily.parse(family)
    _validate_time(t)
    check_stability(family, params)
    x = float(x)
    lam = params.lam
    kt = params.kappa * t
    if lam == 2.0:
        return EvalResult(0.5 * math.erfc(-x / math.sqrt(4.0 * kt)), 0.0)
    if lam == 1.0:
        if family is SymbolFamily.RIESZ:
            return EvalResult(0.5 + math.atan(x / kt) / math.pi, 0.0)
        shift = -kt if family is SymbolFamily.ONE_SIDED_RIGHT else kt
        return EvalResult(1.0 if x >= shift else 0.0, 0.0)
    if family is SymbolFamily.ONE_SIDED_LEFT or (family is SymbolFamily.RIESZ and x < 0.0):
        mirror = SymbolFamily.ONE_SIDED_RIGHT if family is SymbolFamily.ONE_SIDED_LEFT else family
        r = green_cdf(mirror, params, -x, t, tol)
        return EvalResult(1.0 - r.value, r.abs_err_estimate)
    # F(x) = 1/2 - (1/pi) Im int_0^inf (exp(-ikx) phi(k) - exp(-k k0)) / k dk,
    # the subtracted term is real on the axis and decays on the rotated ray
    psi = _ray_angle(family, lam, x)
    e_psi = complex(math.cos(psi), math.sin(psi))
    if family is SymbolFamily.RIESZ:
        coef = -kt * complex(math.cos(lam * psi), math.sin(lam * psi))
    else:
        ang = lam * psi - 0.5 * math.pi * lam
        coef = kt * complex(math.cos(ang), math.sin(ang))
    lin = -1j * x * e_psi
    k0 = kt ** (1.0 / lam)

    def integrand(r):
        k = r * e_psi
        val = np.exp(coef * r**lam + lin * r) - np.exp(-k * k0)
        return (val / r).imag

    decay = min((_DECAY / max(-coef.real, 1e-300)) ** (1.0 / lam),
                _DECAY / max(-lin.real, 1e-300))
    upper = max(decay, _DECAY / (k0 * math.cos(psi)))
    scale = min(1.0 / k0, upper)
    osc = abs((lin * 1j).real)
    period = 2.0 * math.pi / osc if osc > 0 else None
    edges = graded_edges(upper, scale, period)
    # the (r -> 0) limit of the integrand is finite; keep the first node off zero
    val, err = adaptive_gl(integrand, edges, tol * math.pi)
    return EvalResult(0.5 - val / math.pi, err / math.pi)


# --------------------------------------------------------------------------
# solution
# --------------------------------------------------------------------------


def _kernel(s, t):
    """(exp(s t) - 1)/s with the removable singularity at s = 0 handled."""
    st = s * t
    small = np.abs(st) < 1e-3
    safe = np.where(small, 1.0, s)
    out = np.where(small, 0.0, np.expm1(st) / safe)
    series = t * (1.0 + st / 2.0 + st**2 / 6.0 + st**3 / 24.0 + st**4 / 120.0)
    return np.where(small, series, out)


def _advective_solution(family, params, x, t):
    # one-sided lam = 1: pure transport at speed a +/- kappa
    speed = params.a + (params.kappa if family is SymbolFamily.ONE_SIDED_RIGHT else -params.kappa)
    if speed == 0.0:
        return EvalResult(t if x == 0.0 else 0.0, 0.0)
    tau = -x / speed
    if 0.0 < tau < t:
        return EvalResult(1.0 / abs(speed), 0.0)
    return EvalResult(0.0, 0.0)


def _solution_real_axis(family, params, x, t, tol):
    lam, kappa, a = params.lam, params.kappa, params.a
    if family is SymbolFamily.RIESZ:
        damp = kappa
    else:
        damp = -kappa * math.cos(0.5 * math.pi * lam)
    if damp * t <= 0.0:
        raise StabilityError("kernel does not decay along the real axis")
    k_cut = (_DECAY / (damp * t)) ** (1.0 / lam)

    def s_of(k):
        return symbol(family, params, k) - 1j * a * k

    def integrand(k):
        return (_kernel(s_of(k), t) * np.exp(-1j * k * x)).real

    scale = min((kappa * t) ** (-1.0 / lam), k_cut)
    speeds = [abs(x), abs(x + a * t)]
    osc = max(speeds)
    period = 2.0 * math.pi / osc if osc > 0 else None
    edges = graded_edges(k_cut, scale, period, max_uniform=200_000)
    val, err = adaptive_gl(integrand, edges, tol * math.pi * 0.5)

    # beyond k_cut the kernel equals -1/s to within exp(-_DECAY)
    def tail_re(k):
        return (-1.0 / s_of(k)).real

    def tail_im(k):
        return (-1.0 / s_of(k)).imag

    opts = dict(epsabs=tol * math.pi * 0.25, limlst=200, limit=200)
    # up to k ~ 1/|x| the tail barely oscillates; integrate it in log k there
    k_osc = k_cut if x == 0.0 else max(k_cut, 1.0 / abs(x))
    if x == 0.0:
        tail, tail_err = integrate.quad(tail_re, k_cut, np.inf, epsabs=opts["epsabs"], limit=400)
    else:
        tail, tail_err = 0.0, 0.0
        if k_osc > k_cut:
            def slow(u):
                k = math.exp(u)
                return k * (-np.exp(-1j * k * x) / s_of(k)).real
            tail, tail_err = integrate.quad(slow, math.log(k_cut), math.log(k_osc),
                                            epsabs=opts["epsabs"], limit=400)
        t1, e1 = integrate.quad(tail_re, k_osc, np.inf, weight="cos", wvar=x, **opts)
        t2, e2 = integrate.quad(tail_im, k_osc, np.inf, weight="sin", wvar=x, **opts)
        tail, tail_err = tail + t1 + t2, tail_err + e1 + e2
    value = (val + tail) / math.pi
    return EvalResult(value, (err + tail_err) / math.pi + 1e-15 * abs(value))


def _crossing_window(x, a, t):
    """Sub-interval of [0, t] on which x + a t' > 0."""
    if a == 0.0:
        return (0.0, t) if x > 0.0 else None
    tau = -x / a
    if a > 0.0:
        lo, hi = max(0.0, tau), t
    else:
        lo, hi = 0.0, min(t, tau)
    if hi <= lo:
        return None
    return lo, hi


def _solution_hankel(params, x, t, tol, segment=None):
    """Right-sided continuation of the solution for lam < 1.

    Off the crossing line the time integral is taken over the Hankel-type
    propagator. When the advected source crosses the evaluation point at
    ``t' = tau_c`` the real time axis is left on two small arcs around
    ``tau_c`` (one per boundary value ``p +/- i0``), where the boundary-value
    power series converges uniformly. This keeps the point-supported
    ``delta``-type pieces of the continuation that a real-axis integral of the
    resummed function would miss.
    """
    lam, kappa, a = params.lam, params.kappa, params.a
    window = _crossing_window(x, a, t)
    if window is None:
        return EvalResult(0.0, 0.0)
    total, err = 0.0, 0.0
    tau_c = -x / a if a != 0.0 else None
    segments = [window]
    if tau_c is not None and 0.0 < tau_c < t:
        rho = 0.5 * min(tau_c, t - tau_c)
        arc, arc_err = _crossing_arcs(lam, kappa, a, tau_c, rho, tol)
        total += arc
        err += arc_err
        lo, hi = window
        segments = [(max(lo, tau_c + rho), hi)] if a > 0 else [(lo, min(hi, tau_c - rho))]
    segment = segment or (lambda lo, hi: _hankel_segment(lam, kappa, a, x, lo, hi, tol))
    for lo, hi in segments:
        val, e = segment(lo, hi)
        total += val
        err += e
    return EvalResult(total, err)


def _hankel_segment(lam, kappa, a, x, lo, hi, tol):
    """int_lo^hi G(x + a t', t') dt' for a window where x + a t' > 0 throughout."""
    if hi <= lo:
        return 0.0, 0.0
    ph = complex(math.cos(math.pi * lam), math.sin(math.pi * lam))
    ends = [(hi, 1.0), (lo, -1.0)]
    m = _hankel_power(lam)

    def integrand(u):
        # y = u^m with m (1 - lam) >= 1 makes the y^(-lam) endpoint bounded
        y = u**m
        sig = kappa * y**lam * ph - a * y
        num = sum(sgn * np.exp(-(x + a * tau) * y + kappa * tau * y**lam * ph) for tau, sgn in ends)
        return m * u ** (m - 1.0) * (num / sig).imag

    p_min = min(x + a * lo, x + a * hi)
    upper = (_DECAY / p_min) ** (1.0 / m)
    scale = min(p_min ** (-1.0 / m), upper)
    val, e = adaptive_gl(integrand, graded_edges(upper, scale), tol * math.pi * 0.5)
    return -val / math.pi, e / math.pi


def _hankel_power(lam):
    return max(2.0, 1.0 / (1.0 - lam))


def _boundary_series(lam, kappa, p, tp, sign):
    """sum_n (kappa t')^n Gamma(lam n + 1)/n! e^{+/- i pi lam n} p^(-lam n - 1)."""
    w = kappa * tp * p ** (-lam) * complex(math.cos(math.pi * lam), sign * math.sin(math.pi * lam))
    total = np.ones_like(w)
    term_mag = 1.0
    n = 0
    while True:
        n += 1
        coef = math.exp(special.gammaln(lam * n + 1.0) - special.gammaln(n + 1.0))
        term = coef * w**n
        total = total + term
        term_mag = float(np.max(np.abs(term)))
        if term_mag < 1e-17 * float(np.min(np.abs(total))) and n > 3:
            break
        if n > 2000:
            raise QuadratureError("boundary-value series did not converge on the crossing arc")
    return total / p


def _crossing_arcs(lam, kappa, a, tau_c, rho, tol):
    """Contribution of the two half-circles |t' - tau_c| = rho."""
    rho_p = abs(a) * rho

    def arc(sign):
        def integrand(theta):
            p = rho_p * np.exp(1j * sign * theta)
            tp = tau_c + p / a
            return _boundary_series(lam, kappa, p, tp, sign) * 1j * p

        # upper arc runs theta = pi -> 0, lower arc theta = -pi -> 0;
        # both are integrated over [0, pi] with the orientation fixed below
        val, e = adaptive_gl(integrand, np.linspace(0.0, math.pi, 9), tol * 1e-2)
        return (-val if sign > 0 else val), e

    up, e1 = arc(+1.0)
    down, e2 = arc(-1.0)
    val = (1j / (2.0 * math.pi * abs(a))) * (up - down)
    return val.real, (e1 + e2) / (2.0 * math.pi * abs(a)) + 1e-16 * abs(val)


def solution_quadrature(family, params: TransportParams, x: float, t: float,
                        tol: float = 1e-11) -> EvalResult:
    """Solution f(x, t) from the Fourier representation of its time integral.

    The kernel ``(exp(s t) - 1)/s`` with ``s = symbol(k) - i a k`` is
    integrated directly, so no propagator evaluations are needed.

    Examples
    --------
    >>> p = TransportParams(1.0, 0.4, 0.6)
    >>> solution_quadrature("OneSidedRight", p, -0.5, 1.0).value
    1.0
    """
    family = SymbolFamily.parse(family)
    _validate_time(t)
    x = float(x)
    if params.kappa == 0.0:
        return _advective_solution(SymbolFamily.ONE_SIDED_RIGHT, params, x, t)
    if family is SymbolFamily.ONE_SIDED_LEFT:
        mirrored = params.replace(a=-params.a)
        return solution_quadrature(SymbolFamily.ONE_SIDED_RIGHT, mirrored, -x, t, tol)
    if _one_sided(family) and params.lam == 1.0:
        return _advective_solution(family, params, x, t)
    if _needs_continuation(family, params):
        return _solution_hankel(params, x, t, tol)
    return _solution_real_axis(family, params, x, t, tol)


def solution_time_integral(family, params: TransportParams, x: float, t: float,
                           tol: float = 1e-10) -> EvalResult:
    """Solution as ``int_0^t G(x + a t', t') dt'`` with nested quadrature.

    The outer variable is ``u = t'^(1/lam)``, which keeps the integrand
    bounded as the propagator collapses onto a delta at small times.
    """
    family = SymbolFamily.parse(family)
    _validate_time(t)
    x = float(x)
    lam, a = params.lam, params.a
    if params.kappa == 0.0 or (_one_sided(family) and lam == 1.0):
        return solution_quadrature(family, params, x, t)
    if family is SymbolFamily.ONE_SIDED_LEFT:
        mirrored = params.replace(a=-a)
        return solution_time_integral(SymbolFamily.ONE_SIDED_RIGHT, mirrored, -x, t, tol)
    inner_tol = tol * 1e-2

    def outer(lo, hi, points=()):
        inner_err = [0.0]

        def integrand(u):
            if u <= 0.0:
                return 0.0
            tp = u**lam
            g = green_quadrature(family, params, x + a * tp, tp, inner_tol)
            jac = lam * u ** (lam - 1.0)
            inner_err[0] = max(inner_err[0], g.abs_err_estimate * jac)
            return g.value * jac

        u_lo, u_hi = lo ** (1.0 / lam), hi ** (1.0 / lam)
        pts = [p for p in points if u_lo < p < u_hi]
        with warnings.catch_warnings():
            # quad's own error estimate is returned; its warnings add nothing
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(integrand, u_lo, u_hi, points=pts or None,
                                      epsabs=tol, epsrel=1e-11, limit=400)
        return val, err + inner_err[0] * (u_hi - u_lo)

    cuts = []
    if x != 0.0:
        # times at which spreading or drift first covers |x|; tiny near the source
        for tau in (abs(x) ** lam / params.kappa, abs(x / a) if a else 0.0):
            cuts.extend(s * tau for s in (0.1, 1.0, 10.0))
    tau_c = -x / a if a != 0.0 else 0.0
    if 0.0 < tau_c < t:
        # the source sweeps past x within a few spreading widths of tau_c
        cuts.append(tau_c)
        width = (params.kappa * tau_c) ** (1.0 / lam) / abs(a)
        cuts.extend(tau_c + s * width for m in (1.0, 10.0, 100.0, 1e3) for s in (-m, m))
    cuts = [c for c in cuts if 0.0 < c < t]
    if cuts:
        # decade cuts up to t keep each segment well scaled for quad
        c = min(cuts) * 10.0
        while c < t:
            cuts.append(c)
            c *= 10.0
    cuts = sorted(set(cuts))

    def split(lo, hi):
        # one quad call per segment: breakpoints can span many decades
        edges = [lo, *(c for c in cuts if lo < c < hi), hi]
        val = err = 0.0
        for a_, b_ in zip(edges, edges[1:]):
            v, e = outer(a_, b_)
            val += v
            err += e
        return val, err

    if _needs_continuation(family, params):
        if x == 0.0:
            raise ValueError("time integral is singular at x = 0")
        return _solution_hankel(params, x, t, tol, segment=split)
    if x == 0.0 and lam < 1.0:
        raise ValueError("time integral diverges at x = 0 for lambda < 1")
    return EvalResult(*split(0.0, t))
