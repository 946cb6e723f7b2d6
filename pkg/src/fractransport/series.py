"""Power-series propagators and hypergeometric-series solutions on the real axis.

The propagator of the one-sided operators expands as

    G(x, t) = sum_n (kappa t)^n / n! * Gamma(lam n + 1) * d_n(x)

where ``d_n`` is the real-axis jump of ``(i/2pi) e^{i phi_n} (x + i0)^(-lam n - 1)``
minus its mirror image, and the time-integrated solution carries an extra
Gauss hypergeometric factor. For ``lam <= 1`` the series converge for every
``x != 0``. For ``lam > 1`` they are asymptotic in ``|x| (kappa t)^(-1/lam)``
and are truncated at their smallest term, whose size is reported as the error
proxy.

The ``n = 0`` term is ``delta(x)`` for the propagator and is therefore
absent from every pointwise value.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from . import specfun
from .spectral import SymbolFamily, TransportParams

__all__ = [
    "SeriesMode",
    "SeriesResult",
    "TruncationPolicy",
    "SeriesDivergenceError",
    "cut_density_power",
    "green_series",
    "solution_series",
    "green_two_sided",
]


class SeriesMode(str, enum.Enum):
    CONVERGENT = "Convergent"
    ASYMPTOTIC_OPTIMAL = "AsymptoticOptimal"


class SeriesDivergenceError(ArithmeticError):
    """The series gives no usable approximation at this point."""


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-12
    n_max: int = 200

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SeriesResult:
    """Partial sum plus truncation diagnostics.

    ``smallest_term`` is the envelope of the last term examined: below the
    tolerance for convergent sums, and the minimum over the sequence for
    optimally truncated asymptotic sums. ``roundoff`` bounds cancellation
    among the summed terms.
    """

    value: float
    n_used: int
    smallest_term: float
    mode: SeriesMode
    roundoff: float = 0.0

    @property
    def err_estimate(self) -> float:
        return max(self.smallest_term, self.roundoff)


def cut_density_power(mu: float, phase: float, x: float) -> float:
    """Real-axis density of ``(i/2pi)[e^{i phase}(x+i0)^-mu - e^{-i phase}(x-i0)^-mu]``.

    >>> round(cut_density_power(2.5, 1.5 * math.pi, 2.0), 8)
    0.05626977
    """
    if x == 0.0:
        raise ValueError("the cut density is a distribution at x = 0; no point value")
    if x > 0.0:
        return -_sin_pi(phase / math.pi) * x ** (-mu) / math.pi
    return -_sin_pi(phase / math.pi - mu) * abs(x) ** (-mu) / math.pi


def _sin_pi(q):
    # exact zero at integers, where the two boundary values coincide
    if abs(q - round(q)) < 1e-12:
        return 0.0
    return math.sin(math.pi * q)


def _check_case(case):
    case = SymbolFamily.parse(case)
    if case is SymbolFamily.RIESZ:
        raise ValueError("series solutions exist for the one-sided families only")
    return case


def _phase(case, lam, n):
    return math.pi * lam * n if case is SymbolFamily.ONE_SIDED_RIGHT else 0.0


def _vanishes(case, x):
    # every term is identically zero on the far side of each one-sided problem
    return (case is SymbolFamily.ONE_SIDED_RIGHT and x < 0.0) or (
        case is SymbolFamily.ONE_SIDED_LEFT and x > 0.0
    )


def _sum_terms(terms, lam, policy):
    """Sum ``(value, envelope)`` pairs from an iterator with the truncation rule.

    ``envelope`` is the term size with any vanishing trigonometric factor
    removed, so exact zeros do not fake convergence.
    """
    total = 0.0
    biggest = 0.0
    smallest = math.inf
    n_used = 0
    prev_env = math.inf
    asymptotic = lam > 1.0
    for n, (value, env) in enumerate(terms, start=1):
        if not (math.isfinite(value) and math.isfinite(env)):
            raise SeriesDivergenceError(f"term {n} overflowed; the series is not usable here")
        if asymptotic and env > prev_env and n > 1:
            # the previous term was the minimum; it is not added
            break
        if asymptotic and env >= smallest:
            break
        smallest = min(smallest, env)
        if not asymptotic and env <= policy.tol and env < prev_env:
            total += value
            n_used = n
            biggest = max(biggest, abs(value))
            break
        total += value
        biggest = max(biggest, abs(value))
        n_used = n
        prev_env = env
        if n >= policy.n_max:
            if not asymptotic and env > policy.tol:
                raise SeriesDivergenceError(
                    f"series not converged after {policy.n_max} terms (last term {env:.3g})"
                )
            break
    roundoff = 4e-16 * (biggest + abs(total))
    if asymptotic:
        if smallest > max(policy.tol, abs(total)):
            raise SeriesDivergenceError(
                f"asymptotic series useless here: smallest term {smallest:.3g} exceeds the sum"
            )
        return SeriesResult(total, n_used, smallest, SeriesMode.ASYMPTOTIC_OPTIMAL, roundoff)
    return SeriesResult(total, n_used, smallest, SeriesMode.CONVERGENT, roundoff)


def _log_prefactor(params, t, n, extra_t=0):
    """log of kappa^n t^(n + extra_t) Gamma(lam n + 1) / n!."""
    lam, kappa = params.lam, params.kappa
    out = (n + extra_t) * math.log(t) + math.lgamma(lam * n + 1.0) - math.lgamma(n + 1.0)
    if n:
        out += n * math.log(kappa)
    return out


def green_series(case, params: TransportParams, x: float, t: float,
                 policy: TruncationPolicy = TruncationPolicy()) -> SeriesResult:
    """One-sided propagator from its power series in ``kappa t |x|^-lam``.

    >>> r = green_series("OneSidedLeft", TransportParams(1.5, 0.1), 2.0, 1.0)
    >>> r.value
    0.0
    """
    case = _check_case(case)
    if not t > 0.0:
        raise ValueError("t must be positive")
    if x == 0.0:
        raise ValueError("x = 0 carries the delta(x) term; no point value")
    lam = params.lam
    if params.kappa == 0.0 or (_vanishes(case, x) and lam <= 1.0):
        return SeriesResult(0.0, 0, 0.0, SeriesMode.CONVERGENT)
    if _vanishes(case, x):
        # every term is zero here, but for lam > 1 the propagator itself is not:
        # its bulk straddles the origin. Quote the first-term envelope as the scale.
        env = math.exp(_log_prefactor(params, t, 1) - (lam + 1.0) * math.log(abs(x))) / math.pi
        return SeriesResult(0.0, 0, env, SeriesMode.ASYMPTOTIC_OPTIMAL)
    log_ax = math.log(abs(x))

    def terms():
        n = 0
        while True:
            n += 1
            mu = lam * n + 1.0
            log_env = _log_prefactor(params, t, n) - mu * log_ax - math.log(math.pi)
            env = math.exp(min(log_env, 700.0))
            d = cut_density_power(mu, _phase(case, lam, n), x) * abs(x) ** mu * math.pi
            yield env * d, env

    return _sum_terms(terms(), lam, policy)


def _bracket(case, lam, n, x, at):
    """Im[e^{i phi}(x+i0)^-mu F(mu, n+1; n+2; -at/(x+i0))] scaled by |x|^mu.

    Returns ``(imag_part, modulus)``; the modulus is the envelope without
    the trigonometric factor.
    """
    mu = lam * n + 1.0
    phi = _phase(case, lam, n)
    # -at/(x + i eps) has imaginary part of the sign of a t
    zr = -at / x
    z = complex(zr, math.copysign(1e-300, at) if zr > 1.0 else 0.0)
    if x > 0.0:
        branch = 1.0
    else:
        # (x + i0)^-mu with x < 0 picks arg(x + i0) = pi
        branch = cmath.exp(-1j * math.pi * mu)
    if at == 0.0:
        f = 1.0 + 0j
    else:
        f = specfun.hyp2f1(mu, n + 1.0, n + 2.0, z)
    val = cmath.exp(1j * phi) * branch * f
    return val.imag, abs(f)


def solution_series(case, params: TransportParams, x: float, t: float,
                    policy: TruncationPolicy = TruncationPolicy(),
                    guard: float = 1e-6) -> SeriesResult:
    """Solution ``f(x, t)`` from the hypergeometric series.

    Term ``n`` is ``kappa^n t^(n+1) Gamma(lam n + 1) B(1, n + 1) / n!`` times the
    cut density of ``(x +/- i0)^-mu F(mu, n+1; n+2; -a t/(x +/- i0))`` with
    ``mu = lam n + 1``. The boundary values are taken exactly by placing the
    hypergeometric argument on the appropriate side of its cut.
    """
    case = _check_case(case)
    if not t > 0.0:
        raise ValueError("t must be positive")
    if x == 0.0:
        raise ValueError("x = 0 is the source point; no point value")
    at = params.a * t
    if abs(x + at) < guard * (1.0 + abs(at)):
        raise ValueError("x lies on the singular line x + a t = 0 (guard band)")
    lam = params.lam
    log_ax = math.log(abs(x))

    def term(n):
        mu = lam * n + 1.0
        im, mod = _bracket(case, lam, n, x, at)
        log_p = _log_prefactor(params, t, n, extra_t=1) - math.log(n + 1.0) - mu * log_ax
        scale = math.exp(min(log_p, 700.0)) / math.pi
        return -scale * im, scale * max(mod, 1e-300)

    f0, _ = term(0)
    if params.kappa == 0.0:
        return SeriesResult(f0, 1, 0.0, SeriesMode.CONVERGENT)

    def terms():
        n = 0
        while True:
            n += 1
            yield term(n)

    rest = _sum_terms(terms(), lam, policy)
    return SeriesResult(f0 + rest.value, rest.n_used + 1, rest.smallest_term, rest.mode,
                        rest.roundoff + 4e-16 * abs(f0))


def green_two_sided(params: TransportParams, x: float, t: float,
                    policy: TruncationPolicy = TruncationPolicy()) -> SeriesResult:
    """Right-sided series for ``x > 0`` glued to the left-sided one for ``x < 0``."""
    case = SymbolFamily.ONE_SIDED_RIGHT if x > 0.0 else SymbolFamily.ONE_SIDED_LEFT
    return green_series(case, params, x, t, policy)
