"""Complex Gamma, log-Gamma, Beta and the Gauss hypergeometric function.

All routines work on Python complex scalars and never touch shared state.
``log_gamma`` follows the usual analytic-continuation convention (branch cut
along the negative real axis, imaginary part continuous off the cut), so that
``exp(log_gamma(z)) == gamma(z)`` everywhere off the poles.
"""
from __future__ import annotations

import cmath
import math

import mpmath

__all__ = [
    "PoleError",
    "HypergeometricError",
    "gamma",
    "log_gamma",
    "rgamma",
    "beta",
    "hyp2f1",
    "hyp2f1_weak_identity",
]

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)

# Stirling coefficients B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)

_SMALL_X = 7.0
_SMALL_Y = 7.0


class PoleError(ValueError):
    """Argument sits on a pole of the Gamma function."""


class HypergeometricError(ArithmeticError):
    """The hypergeometric series could not be evaluated to the target accuracy."""


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _sinpi(z: complex) -> complex:
    """sin(pi z) with exact zeros at the integers."""
    x = z.real
    n = math.floor(x + 0.5)
    r = x - n  # r in [-0.5, 0.5)
    w = complex(r, z.imag)
    s = cmath.sin(math.pi * w)
    return -s if n % 2 else s


def _stirling(z: complex) -> complex:
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    acc = 0.0j
    power = zinv
    for c in _STIRLING:
        acc += c * power
        power *= zinv2
    return (z - 0.5) * cmath.log(z) - z + LOG_SQRT_2PI + acc


def _log_gamma_recurrence(z: complex) -> complex:
    # upper half plane only; counts sign flips of the shift product so that the
    # branch stays continuous (Hare's algorithm)
    signflips = 0
    sb = False
    shiftprod = z
    z = z + 1.0
    while z.real <= _SMALL_X:
        shiftprod *= z
        nsb = math.copysign(1.0, shiftprod.imag) < 0
        if nsb and not sb:
            signflips += 1
        sb = nsb
        z = z + 1.0
    return _stirling(z) - cmath.log(shiftprod) - signflips * 2j * math.pi


def log_gamma(z) -> complex:
    """Logarithm of the Gamma function, analytically continued off the real axis."""
    z = complex(z)
    if not (cmath.isfinite(z)):
        raise ValueError(f"non-finite argument {z!r}")
    if _is_pole(z):
        raise PoleError(f"log_gamma pole at {z.real:g}")
    if z.real > _SMALL_X or abs(z.imag) > _SMALL_Y:
        return _stirling(z)
    if z.real < 0.1:
        tmp = math.copysign(2.0 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
        return complex(LOG_PI, tmp) - cmath.log(_sinpi(z)) - log_gamma(1.0 - z)
    if math.copysign(1.0, z.imag) > 0:
        return _log_gamma_recurrence(z)
    return _log_gamma_recurrence(z.conjugate()).conjugate()


def gamma(z) -> complex:
    """Gamma function of a complex argument.

    Raises
    ------
    PoleError
        If ``z`` is a non-positive integer.
    """
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"gamma pole at {z.real:g}")
    if z.imag == 0.0 and z.real == math.floor(z.real) and z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * gamma(1.0 - z))
    return cmath.exp(log_gamma(z))


def rgamma(z) -> complex:
    """Reciprocal Gamma function; entire, so poles of Gamma map to zero."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    return 1.0 / gamma(z)


def beta(a, b) -> complex:
    """Euler Beta function Gamma(a) Gamma(b) / Gamma(a + b)."""
    a, b = complex(a), complex(b)
    if _is_pole(a) or _is_pole(b):
        raise PoleError("beta argument on a Gamma pole")
    return gamma(a) * gamma(b) * rgamma(a + b)


# --------------------------------------------------------------------------
# Gauss hypergeometric function
# --------------------------------------------------------------------------

_SERIES_MAX_TERMS = 20000
_DEGENERATE_STEP = 1e-3
_EPS = 2.2e-16


def _is_int(x: complex, tol: float = 1e-12) -> bool:
    return abs(x.imag) < tol and abs(x.real - round(x.real)) < tol


def _gauss_series(a: complex, b: complex, c: complex, z: complex):
    """Gauss series; returns (sum, sum of |terms|)."""
    if z == 0:
        return 1.0 + 0j, 1.0
    term = 1.0 + 0j
    total = 1.0 + 0j
    mag = 1.0
    small = 0
    for k in range(_SERIES_MAX_TERMS):
        num = (a + k) * (b + k)
        if num == 0:
            return total, mag
        term *= num / ((c + k) * (k + 1.0)) * z
        total += term
        mag += abs(term)
        if abs(term) <= 1e-17 * abs(total):
            # a small term only counts once the term ratio is contracting
            ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2)) * z)
            if ratio < 1.0:
                small += 1
                if small >= 2:
                    return total, mag
        else:
            small = 0
    raise HypergeometricError(
        f"Gauss series did not converge for a={a}, b={b}, c={c}, z={z}"
    )


def _direct(a, b, c, z):
    return _gauss_series(a, b, c, z)


def _pfaff(a, b, c, z):
    # DLMF 15.8.1, using whichever of the two symmetric forms has smaller growth
    if abs(a * (c - b)) > abs(b * (c - a)):
        a, b = b, a
    w = z / (z - 1.0)
    pref = (1.0 - z) ** (-a)
    val, mag = _gauss_series(a, c - b, c, w)
    return pref * val, abs(pref) * mag


def _connection(pairs):
    total = 0j
    scale = 0.0
    for coeff, (val, mag) in pairs:
        total += coeff * val
        scale += abs(coeff) * mag
    return total, scale


def _inverse_z(a, b, c, z):
    # DLMF 15.8.2; singular when a - b is an integer
    w = 1.0 / z
    mz = -z
    gc = gamma(c)
    return _connection([
        (gc * gamma(b - a) * rgamma(b) * rgamma(c - a) * mz ** (-a),
         _gauss_series(a, a - c + 1, a - b + 1, w)),
        (gc * gamma(a - b) * rgamma(a) * rgamma(c - b) * mz ** (-b),
         _gauss_series(b, b - c + 1, b - a + 1, w)),
    ])


def _one_minus_z(a, b, c, z):
    # DLMF 15.8.4; singular when c - a - b is an integer
    w = 1.0 - z
    s = c - a - b
    gc = gamma(c)
    return _connection([
        (gc * gamma(s) * rgamma(c - a) * rgamma(c - b),
         _gauss_series(a, b, 1 - s, w)),
        (gc * gamma(-s) * rgamma(a) * rgamma(b) * w ** s,
         _gauss_series(c - a, c - b, s + 1, w)),
    ])


def _inverse_one_minus_z(a, b, c, z):
    # DLMF 15.8.3; singular when a - b is an integer
    w = 1.0 / (1.0 - z)
    mz = 1.0 - z
    gc = gamma(c)
    return _connection([
        (gc * gamma(b - a) * rgamma(b) * rgamma(c - a) * mz ** (-a),
         _gauss_series(a, c - b, a - b + 1, w)),
        (gc * gamma(a - b) * rgamma(a) * rgamma(c - b) * mz ** (-b),
         _gauss_series(b, c - a, b - a + 1, w)),
    ])


def _perturbed_limit(fn, h: float = _DEGENERATE_STEP):
    """Limit of fn(d) as d -> 0 from symmetric samples, Richardson to O(h^6).

    ``fn`` returns (value, scale); the returned scale is the worst sample's
    scale so the caller can judge cancellation.
    """
    samples = {}
    scale = 0.0
    for d in (h, -h, 2 * h, -2 * h, 4 * h, -4 * h):
        v, sc = fn(d)
        samples[d] = v
        scale = max(scale, sc)
    g1 = 0.5 * (samples[h] + samples[-h])
    g2 = 0.5 * (samples[2 * h] + samples[-2 * h])
    g4 = 0.5 * (samples[4 * h] + samples[-4 * h])
    r1 = (4.0 * g1 - g2) / 3.0
    r2 = (4.0 * g2 - g4) / 3.0
    # perturbed samples carry O(1/h) cancelling pieces; Richardson weights add ~x3
    return (16.0 * r1 - r2) / 15.0, scale * 3.0


_ROUTES = {
    "direct": (_direct, None),
    "pfaff": (_pfaff, None),
    "inverse": (_inverse_z, lambda a, b, c: a - b),
    "inverse_one_minus": (_inverse_one_minus_z, lambda a, b, c: a - b),
    "one_minus": (_one_minus_z, lambda a, b, c: c - a - b),
}


def _evaluate_route(route, a, b, c, z):
    transform, gap = _ROUTES[route]
    if gap is None or not _is_int(gap(a, b, c)):
        return transform(a, b, c, z)
    # every connection formula is analytic in b at fixed (a, c, z)
    return _perturbed_limit(lambda d: transform(a, b + d, c, z))


def hyp2f1(a, b, c, z) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; z).

    The argument is mapped by one of the identity, Pfaff, ``1 - z``, ``1/z``
    or ``1/(1 - z)`` transformations into the unit disc and the Gauss series is
    summed there. Routes are tried in order of the transformed modulus; the
    first whose cancellation (sum of term magnitudes over the result) stays
    modest wins, otherwise the best-conditioned candidate is returned.
    Connection formulas whose Gamma prefactors are singular (integer parameter
    differences) are evaluated as a symmetric Richardson limit in ``b``.

    Points on the cut ``[1, inf)`` take the side given by the sign of
    ``z.imag``; pass a tiny imaginary offset to pick a side.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    for v in (a, b, c, z):
        if not cmath.isfinite(v):
            raise ValueError("hyp2f1: non-finite input")
    if _is_pole(c):
        raise PoleError("hyp2f1: c is a non-positive integer")
    if a == 0 or b == 0 or z == 0:
        return 1.0 + 0j
    if z == 1.0:
        s = c - a - b
        if s.real <= 0:
            raise HypergeometricError("hyp2f1 diverges at z = 1 for Re(c-a-b) <= 0")
        return gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
    if (_is_pole(a) or _is_pole(b)) and abs(z) < 1.0:
        return _gauss_series(a, b, c, z)[0]

    w_pfaff = z / (z - 1.0)
    candidates = sorted(
        [
            (abs(z) + (0.5 if z.real < 0 else 0.0), "direct"),
            (abs(w_pfaff), "pfaff"),
            (1.0 / abs(z), "inverse"),
            (1.0 / abs(1.0 - z), "inverse_one_minus"),
            (abs(1.0 - z), "one_minus"),
        ]
    )
    best = None
    for modulus, route in candidates:
        if modulus >= 0.9:
            break
        try:
            val, scale = _evaluate_route(route, a, b, c, z)
        except (HypergeometricError, PoleError, ZeroDivisionError, OverflowError):
            continue
        if not cmath.isfinite(val):
            continue
        cond = scale / abs(val) if val != 0 else math.inf
        if best is None or cond < best[0]:
            best = (cond, val)
        if cond < 1e4:
            break
    if best is None or best[0] > 1e6:
        # near |z| = 1, arg z ~ pi/3 no transformation contracts well
        return _hyp2f1_mp(a, b, c, z)
    return best[1]


def _hyp2f1_mp(a, b, c, z):
    with mpmath.workdps(30):
        val = mpmath.hyp2f1(a, b, c, z)
    return complex(val)


def hyp2f1_weak_identity(lam: float, z) -> complex:
    """Closed form of 2F1(lam + 1, 2; 3; z).

    Equal to ``2 / (lam (lam - 1) z^2) * (1 + (lam z - 1) / (1 - z)^lam)`` with
    the principal branch of ``(1 - z)^lam``. Valid for ``lam`` not 0 or 1.
    The bracket cancels to ``O(z^2)``, so for ``|z| < 0.05`` the power series
    ``sum (lam + 1)_n 2 / (n + 2) z^n / n!`` is summed instead; ``z = 0`` gives 1.
    """
    lam = float(lam)
    z = complex(z)
    if lam in (0.0, 1.0):
        raise ValueError("closed form degenerates for lam in {0, 1}")
    if abs(z) < 0.05:
        total, coef = 0j, 1.0 + 0j
        for n in range(40):
            total += coef * 2.0 / (n + 2.0)
            coef *= (lam + 1.0 + n) * z / (n + 1.0)
            if abs(coef) < 1e-18:
                break
        return total
    return 2.0 / (lam * (lam - 1.0) * z * z) * (1.0 + (lam * z - 1.0) / (1.0 - z) ** lam)
