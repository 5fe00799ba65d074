"""Zolotarev polynomials of the first kind and second type in the extreme case c = 1.

``Z2_n`` is evaluated through ``arccos Z2_n(x) = n I(x)`` where

    I(x) = integral_0^{arccos x} (1 - cos t) / sqrt((cos t - gamma)^2 + eps^2) dt

so no theta functions are needed.  ``Zbar2_n = (9/n^2) amp (1 - Z2_n) / (1 - x)^3``
is the degree n-3 polynomial that solves the weighted problem for six
derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .chebpoly import ChebSeries, deflate_at_one, interpolate
from .elliptic import Modulus, amplitude, jacobi, jacobi_zeta, make_modulus
from .errors import ConvergenceError, DeflationError, DomainError

BRACKET = (0.5, 1.0 - 1e-9)
PANELS_PER_UNIT = 64
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
GL_NODES = 0.5 * (_GL_X + 1.0)
GL_WEIGHTS = 0.5 * _GL_W

DEFLATION_LIMIT = 1e-6


@dataclass(frozen=True)
class ZolotarevParams:
    n: int
    modulus: Modulus
    a: float
    gamma: float
    gamma_minus_one: float
    epsilon: float
    c: float
    amp: float


def residual_c(k: float, n: int) -> float:
    """``cn(2K/n) + 2 sn(2K/n) Z(K/n) - 1``; zero exactly when c = 1.

    Evaluated as ``2 sn Z - (1 - cn)`` with ``1 - cn = 2 sin^2(am/2)`` so the
    two small terms cancel in their own scale rather than against 1.
    """
    if n < 3:
        raise DomainError("Zolotarev degree must be at least 3")
    m = make_modulus(k)
    a = m.big_K / n
    phi = amplitude(2.0 * a, m)
    return 2.0 * math.sin(phi) * jacobi_zeta(a, m) - 2.0 * math.sin(0.5 * phi) ** 2


def _params(n: int, m: Modulus) -> ZolotarevParams:
    a = m.big_K / n
    t = jacobi(2.0 * a, m)
    phi = amplitude(2.0 * a, m)
    one_minus_cn = 2.0 * math.sin(0.5 * phi) ** 2
    dn2 = t.dn * t.dn
    c = 1.0 + (-one_minus_cn + 2.0 * t.sn * jacobi_zeta(a, m)) / t.dn
    return ZolotarevParams(
        n=n,
        modulus=m,
        a=a,
        gamma=t.cn / dn2,
        gamma_minus_one=(m.k * m.k * t.sn * t.sn - one_minus_cn) / dn2,
        epsilon=m.k * m.k_prime * t.sn * t.sn / dn2,
        c=c,
        amp=(one_minus_cn / t.dn) ** 2,
    )


@lru_cache(maxsize=512)
def solve_modulus(n: int) -> ZolotarevParams:
    """Find k_n with c(k_n) = 1 and return the derived parameters.

    Bisection on ``[0.5, 1 - 1e-9]`` down to 1e-13, then two Newton polish
    steps with a centred difference quotient, kept only if they help.
    """
    n = int(n)
    if n < 3:
        raise DomainError("Zolotarev degree must be at least 3")
    lo, hi = BRACKET
    f_lo, f_hi = residual_c(lo, n), residual_c(hi, n)
    if f_lo * f_hi > 0:
        raise ConvergenceError(f"residual_c does not change sign on {BRACKET} for n={n}")
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        f_mid = residual_c(mid, n)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    k = 0.5 * (lo + hi)
    r = residual_c(k, n)
    for _ in range(2):
        h = 1e-7
        slope = (residual_c(k + h, n) - residual_c(k - h, n)) / (2 * h)
        if slope == 0.0:
            break
        k_new = k - r / slope
        r_new = residual_c(k_new, n)
        if abs(r_new) < abs(r):
            k, r = k_new, r_new
    if abs(r) > 1e-12:
        raise ConvergenceError(f"k_{n} residual {r:.3e} exceeds 1e-12")
    return _params(n, make_modulus(k))


def _arc_theta(params: ZolotarevParams, theta: np.ndarray) -> np.ndarray:
    theta = np.ascontiguousarray(np.atleast_1d(np.asarray(theta, dtype=float)))
    return _kernels.arc_quadrature(theta, params.gamma_minus_one, params.epsilon, PANELS_PER_UNIT, GL_NODES, GL_WEIGHTS)


def _theta_of(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise DomainError("Zolotarev evaluation needs x in [-1, 1]")
    return np.arccos(np.clip(x, -1.0, 1.0))


def _shape_like(x, vals):
    return float(vals[0]) if np.ndim(x) == 0 else vals.reshape(np.shape(x))


def arc_integral(params: ZolotarevParams, x):
    """I(x, 1): zero at x = 1, increasing to (n - 2) pi / n at x = -1."""
    return _shape_like(x, _arc_theta(params, _theta_of(x).reshape(-1)))


def z2_eval(params: ZolotarevParams, x):
    """Z2_n(x, k_n, 1) = cos(n I(x, 1)), normalised so that max |Z2_n| = 1."""
    return _shape_like(x, np.cos(params.n * _arc_theta(params, _theta_of(x).reshape(-1))))


def one_minus_z2(params: ZolotarevParams, x):
    """``1 - Z2_n(x)`` computed as ``2 sin^2(n I / 2)`` to keep accuracy near x = 1."""
    half = 0.5 * params.n * _arc_theta(params, _theta_of(x).reshape(-1))
    return _shape_like(x, 2.0 * np.sin(half) ** 2)


def z3_coefficient(params: ZolotarevParams) -> float:
    """Third Taylor coefficient of ``1 - Z2_n`` at x = 1 (in powers of 1 - x)."""
    return params.n**2 / (9.0 * params.amp)


def zbar_deflation(n: int) -> tuple[ChebSeries, tuple[float, float, float]]:
    """Build Zbar2_n and report the three (1 - x) deflation remainders."""
    if n < 4:
        raise DomainError("Zbar2_n needs n >= 4")
    params = solve_modulus(n)
    p = interpolate(lambda x: one_minus_z2(params, x), n)
    remainders = []
    for _ in range(3):
        p, r = deflate_at_one(p)
        remainders.append(r)
    worst = max(abs(r) for r in remainders)
    if worst > DEFLATION_LIMIT:
        raise DeflationError(f"Zbar2_{n}: deflation remainder {worst:.3e} (wrong modulus?)")
    return p * (9.0 / n**2 * params.amp), tuple(remainders)


@lru_cache(maxsize=256)
def zbar_series(n: int) -> ChebSeries:
    """Zbar2_n(x, k_n, 1) as a degree n-3 Chebyshev series with value 1 at x = 1."""
    return zbar_deflation(n)[0]


def touch_points(params: ZolotarevParams) -> list[float]:
    """Interior points of (-1, 1) where Z2_n = +1, i.e. n I(x) = 2 pi j.

    These are the double zeros of ``1 - Z2_n``, sorted descending in x.
    """
    n = params.n
    total = (n - 2) * math.pi
    points = []
    j = 1
    while 2 * math.pi * j < total - 1e-9:
        target = 2.0 * math.pi * j
        g = lambda t, target=target: n * float(_arc_theta(params, np.array([t]))[0]) - target  # noqa: E731
        theta = brentq(g, 0.0, math.pi, xtol=1e-15, rtol=4 * 2.0**-52)
        points.append(math.cos(theta))
        j += 1
    return points
