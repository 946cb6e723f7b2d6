"""Cross-method checks behind ``fractransport validate``.

Each check measures one number and compares it with a tolerance. Checks are
grouped by module so that a subset can be run on its own. For fault-injection
runs the diffusivity seen by a single method can be scaled, which should make
exactly the checks involving that method fail.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import mpmath
import numpy as np

from . import specfun
from .fracderiv import SampledFunction, riesz_derivative, spectral_derivative
from .frame import ShockParams, solution_shock, weak_shock
from .series import solution_series
from .spectral import (SymbolFamily, TransportParams, _green_ray, green_cdf,
                       solution_quadrature, solution_time_integral)
from .stochastic import EnsembleSpec, empirical_ks, simulate_ensemble
from .weakdiff import f_weak

SUBSETS = ("specfun", "spectral", "series", "weakdiff", "frame", "fracderiv", "stochastic")
METHODS = ("quadrature", "time-integral", "series", "weak", "printed", "mc")


@dataclass(frozen=True)
class Check:
    name: str
    subset: str
    measured: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return asdict(self)


class _Context:
    def __init__(self, perturb_method=None, perturb_kappa=1.0, seed=20240607, n_walkers=200_000):
        if perturb_method is not None and perturb_method not in METHODS:
            raise ValueError(f"unknown method {perturb_method!r} for fault injection")
        self.perturb_method = perturb_method
        self.perturb_kappa = float(perturb_kappa)
        self.seed = int(seed)
        self.n_walkers = int(n_walkers)

    def params(self, method, lam, kappa, a=0.0):
        if method == self.perturb_method:
            kappa *= self.perturb_kappa
        return TransportParams(lam, kappa, a)


def _check(out, subset, name, measured, tol):
    measured = float(measured)
    out.append(Check(name, subset, measured, tol, bool(measured <= tol)))


def _specfun(ctx, out):
    worst = 0.0
    for z in np.linspace(0.05, 20.0, 40):
        lhs = z * specfun.hyp2f1(1, 1, 2, -z)
        worst = max(worst, abs(lhs - math.log1p(z)) / math.log1p(z))
    _check(out, "specfun", "z 2F1(1,1;2;-z) = ln(1+z)", worst, 1e-8)
    worst = 0.0
    for a, c, z in [(0.3, 1.7, 0.9), (2.5, 3.5, -4.0), (1.5, 2.5, 1.5 + 0.5j)]:
        worst = max(worst, abs(specfun.hyp2f1(a, 0.0, c, z) - 1.0))
    _check(out, "specfun", "2F1(a,0;c;z) = 1", worst, 1e-8)
    worst = 0.0
    for lam in (0.5, 1.3, 1.5, 1.7):
        for z in (-3.0, -0.5, 0.4, 0.9):
            ref = specfun.hyp2f1_weak_identity(lam, z)
            worst = max(worst, abs(specfun.hyp2f1(lam + 1.0, 2.0, 3.0, z) - ref) / abs(ref))
    _check(out, "specfun", "2F1(lam+1,2;3;z) closed form", worst, 1e-8)
    worst = 0.0
    for z in (0.3, 2.5, -1.5 + 0.7j, 7.2 - 3.0j):
        ref = complex(mpmath.gamma(z))
        worst = max(worst, abs(specfun.gamma(z) - ref) / abs(ref))
    _check(out, "specfun", "gamma vs mpmath", worst, 1e-12)


def _spectral(ctx, out):
    # the public entry point short-circuits to these closed forms; test the contour engine
    p = ctx.params("quadrature", 2.0, 1.0)
    worst = 0.0
    for x in np.linspace(-5.0, 5.0, 21):
        ref = math.exp(-x * x / 4.0) / math.sqrt(4.0 * math.pi)
        worst = max(worst, abs(_green_ray(SymbolFamily.RIESZ, p, abs(x), 1.0, 1e-12).value - ref))
    _check(out, "spectral", "lam=2 Gaussian kernel", worst, 1e-6)
    p = ctx.params("quadrature", 1.0, 1.0)
    worst = 0.0
    for x in np.linspace(-5.0, 5.0, 21):
        ref = 1.0 / (math.pi * (x * x + 1.0))
        worst = max(worst, abs(_green_ray(SymbolFamily.RIESZ, p, abs(x), 1.0, 1e-12).value - ref))
    _check(out, "spectral", "lam=1 Cauchy kernel", worst, 1e-6)
    worst = 0.0
    for fam in ("Riesz", "OneSidedRight", "OneSidedLeft"):
        for x in (-2.0, -0.7, 0.4, 1.5):
            q = solution_quadrature(fam, ctx.params("quadrature", 1.5, 0.1, 1.0), x, 1.0).value
            ti = solution_time_integral(fam, ctx.params("time-integral", 1.5, 0.1, 1.0), x, 1.0).value
            worst = max(worst, abs(q - ti))
    _check(out, "spectral", "quadrature vs time integral", worst, 5e-6)


def _series(ctx, out):
    worst = 0.0
    for lam in (0.5, 0.8):
        for fam, xs in (("OneSidedRight", (0.5, 2.0)), ("OneSidedLeft", (-0.5, -2.0))):
            for x in xs:
                q = solution_quadrature(fam, ctx.params("quadrature", lam, 0.1, 1.0), x, 1.0).value
                s = solution_series(fam, ctx.params("series", lam, 0.1, 1.0), x, 1.0).value
                worst = max(worst, abs(q - s))
    _check(out, "series", "convergent series vs quadrature", worst, 1e-6)
    ratio = 0.0
    for lam in (1.5, 1.8):
        for fam, x in (("OneSidedRight", 3.0), ("OneSidedLeft", -4.5)):
            q = solution_quadrature(fam, ctx.params("quadrature", lam, 0.05, 1.0), x, 1.0).value
            r = solution_series(fam, ctx.params("series", lam, 0.05, 1.0), x, 1.0)
            ratio = max(ratio, abs(q - r.value) / max(r.err_estimate, 1e-6))
    _check(out, "series", "asymptotic series within its smallest term", ratio, 1.0)


def _weakdiff(ctx, out):
    p = ctx.params("weak", 1.5, 0.1, 1.0)
    # closed form behind the source, inside the advected interval
    ref = 1.0 + 0.1 / (1.0 * math.gamma(0.5)) * 0.5 ** (-0.5)
    _check(out, "weakdiff", "f_weak behind the source", abs(f_weak(p, -0.5, 1.0) - ref), 1e-12)
    worst = 0.0
    for x in (-3.0, -1.5, 1.5, 3.0):
        w = f_weak(ctx.params("weak", 1.5, 0.01, 1.0), x, 1.0)
        q = solution_quadrature("Right" if x > 0 else "Left",
                                ctx.params("quadrature", 1.5, 0.01, 1.0), x, 1.0).value
        worst = max(worst, abs(w - q))
    _check(out, "weakdiff", "f_weak vs quadrature at kappa=0.01", worst, 2e-3)


def _frame(ctx, out):
    worst = 0.0
    for t0 in (0.0, 0.5):
        sp = ShockParams(1.0, t0, ctx.params("series", 1.5, 0.02, 1.0))
        sp_printed = ShockParams(1.0, t0, ctx.params("printed", 1.5, 0.02, 1.0))
        for x in np.linspace(2.0, 6.0, 5):
            a = solution_shock(sp, x, 0.5).value
            b = solution_shock(sp_printed, x, 0.5, form="printed").value
            worst = max(worst, abs(a - b))
            c = weak_shock(sp, x - 2.9, 0.5, form="composed")
            d = weak_shock(sp_printed, x - 2.9, 0.5)
            worst = max(worst, abs(c - d))
    _check(out, "frame", "printed vs composed shock-frame forms", worst, 1e-10)


def _fracderiv(ctx, out):
    f = SampledFunction.from_callable(lambda x: np.exp(-x * x), -16.0, 16.0, 512)
    x = f.grid
    g = np.exp(-x * x)
    d1 = spectral_derivative(f, 1, "OneSidedRight").values
    d2 = spectral_derivative(f, 2, "OneSidedRight").values
    worst = max(np.max(np.abs(d1 + 2.0 * x * g)), np.max(np.abs(d2 - (4.0 * x * x - 2.0) * g)))
    _check(out, "fracderiv", "integer-order spectral derivatives", worst, 1e-6)
    worst = 0.0
    for lam in (1.5, 1.9):
        with warnings.catch_warnings():
            # a plane wave never decays; the tail bound is expected to be loose
            warnings.simplefilter("ignore", RuntimeWarning)
            r = riesz_derivative(lambda s: np.cos(2.0 * s), lam, 0.3)
        worst = max(worst, abs(r.value / math.cos(0.6) + 2.0**lam))
    _check(out, "fracderiv", "second-difference symbol -|k|^lam", worst, 1e-6)


def _stochastic(ctx, out):
    worst = 0.0
    for fam in ("Riesz", "OneSidedRight"):
        p_mc = ctx.params("mc", 1.5, 1.0)
        p_q = ctx.params("quadrature", 1.5, 1.0)
        ens = simulate_ensemble(p_mc, fam, EnsembleSpec(ctx.n_walkers, ctx.seed, (1.0,)))
        grid = np.linspace(-40.0, 40.0, 801)
        cdf = np.array([green_cdf(fam, p_q, v, 1.0).value for v in grid])
        worst = max(worst, empirical_ks(ens.at(1.0), lambda s: np.interp(s, grid, cdf)))
    _check(out, "stochastic", "Monte Carlo KS distance", worst, 2.0 / math.sqrt(ctx.n_walkers))


_RUNNERS = {
    "specfun": _specfun,
    "spectral": _spectral,
    "series": _series,
    "weakdiff": _weakdiff,
    "frame": _frame,
    "fracderiv": _fracderiv,
    "stochastic": _stochastic,
}


def run_checks(subsets=None, **options) -> list[Check]:
    """Run the checks for the named subsets (all of them by default)."""
    chosen = list(SUBSETS) if not subsets else list(subsets)
    for name in chosen:
        if name not in _RUNNERS:
            raise ValueError(f"unknown subset {name!r}; choose from {', '.join(SUBSETS)}")
    ctx = _Context(**options)
    out: list[Check] = []
    for name in chosen:
        _RUNNERS[name](ctx, out)
    return out
