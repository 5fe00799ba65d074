"""Polynomials in the Chebyshev T-basis on [-1, 1].

A :class:`ChebSeries` stores plain coefficients, ``p(x) = c0 + sum c_m T_m(x)``.
Division by ``(1 - x)`` is done by synthetic division directly in the T-basis,
never through the monomial basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from . import _kernels
from .errors import AlternationError

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_STEPS = 64


@dataclass(frozen=True, eq=False)
class ChebSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        last = c.size - 1
        while last > 0 and c[last] == 0.0:
            last -= 1
        c = c[: last + 1]
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return eval_series(self, x)

    def __add__(self, other: ChebSeries) -> ChebSeries:
        return ChebSeries(npcheb.chebadd(self.coeffs, other.coeffs))

    def __sub__(self, other: ChebSeries) -> ChebSeries:
        return ChebSeries(npcheb.chebsub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, ChebSeries):
            return ChebSeries(npcheb.chebmul(self.coeffs, other.coeffs))
        return ChebSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ChebSeries(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=6)})"


def cheb_T(m: int, x):
    """Chebyshev polynomial T_m at ``x`` (scalar or array)."""
    if m < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 1.0
    out = np.cos(m * np.arccos(np.clip(x, -1.0, 1.0)))
    if not np.all(inside):
        t_prev, t_cur = np.ones_like(x), x.copy()
        if m == 0:
            t_cur = t_prev
        for _ in range(m - 1):
            t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
        out = np.where(inside, out, t_cur)
    return float(out) if out.ndim == 0 else out


def eval_series(p: ChebSeries, x):
    """Evaluate ``p`` at ``x`` by Clenshaw's recurrence."""
    xa = np.asarray(x, dtype=float)
    flat = np.ascontiguousarray(xa.reshape(-1))
    vals = _kernels.clenshaw(p.coeffs, flat).reshape(xa.shape)
    return float(vals) if vals.ndim == 0 else vals


def chebyshev_gauss_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and abscissae of the ``count``-point Chebyshev-Gauss rule."""
    theta = np.pi * (np.arange(count) + 0.5) / count
    return theta, np.cos(theta)


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        vals = None
    if vals is None or vals.shape != x.shape:
        vals = np.array([float(f(xi)) for xi in x])
    return vals


def interpolate(f: Callable, degree: int) -> ChebSeries:
    """Degree-``degree`` interpolant of ``f`` at the Chebyshev-Gauss nodes.

    ``f`` may be vectorised; scalar callables are evaluated point by point.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    count = degree + 1
    theta, x = chebyshev_gauss_nodes(count)
    vals = _sample(f, x)
    basis = np.cos(np.outer(np.arange(count), theta))
    coeffs = (2.0 / count) * (basis @ vals)
    coeffs[0] *= 0.5
    return ChebSeries(coeffs)


def cheb_coeff(f: Callable, m: int, nodes: int) -> float:
    """``(1/pi) * integral of f T_m / sqrt(1 - x^2)`` by Gauss-Chebyshev.

    Exact for polynomial ``f`` of degree below ``2 * nodes - m``.  For a series
    this returns ``c0`` at ``m = 0`` and ``c_m / 2`` otherwise.
    """
    theta, x = chebyshev_gauss_nodes(nodes)
    vals = _sample(f, x)
    return float(np.dot(vals, np.cos(m * theta)) / nodes)


def times_one_minus_x(q: ChebSeries) -> ChebSeries:
    """Multiply by ``(1 - x)`` using ``x T_m = (T_{m+1} + T_{m-1}) / 2``."""
    return q - ChebSeries(npcheb.chebmulx(q.coeffs))


def deflate_at_one(p: ChebSeries) -> tuple[ChebSeries, float]:
    """Return ``(q, r)`` with ``p(x) = (1 - x) q(x) + r`` identically.

    Back-substitution from the leading coefficient; ``r`` equals ``p(1)``.
    """
    c = p.coeffs
    deg = c.size - 1
    if deg < 1:
        raise ValueError("deflate_at_one needs a polynomial of degree >= 1")
    q = np.zeros(deg + 1)  # q[deg] stays 0
    # the T_{j-1} coefficient of x*q carries weight 1 for T_0 and 1/2 otherwise
    scale = np.full(deg, 0.5)
    scale[0] = 1.0
    q[deg - 1] = -c[deg] / scale[deg - 1]
    for j in range(deg - 1, 0, -1):
        q[j - 1] = (q[j] - 0.5 * q[j + 1] - c[j]) / scale[j - 1]
    remainder = c[0] - (q[0] - 0.5 * q[1])
    return ChebSeries(q[:deg]), float(remainder)


# ---------------------------------------------------------------------------
# extrema


def _weighted(p: ChebSeries, theta: np.ndarray, weight_exponent: int) -> np.ndarray:
    x = np.cos(theta)
    vals = _kernels.clenshaw(p.coeffs, np.ascontiguousarray(x))
    if weight_exponent:
        # 1 - cos t = 2 sin^2(t/2), accurate near x = 1
        vals = vals * (2.0 * np.sin(0.5 * theta) ** 2) ** (0.5 * weight_exponent)
    return vals


def golden_maximize(func: Callable, lo: np.ndarray, hi: np.ndarray, steps: int = _GOLDEN_STEPS):
    """Vectorised golden-section search for the maxima of ``func`` on ``[lo, hi]``."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = func(x1), func(x2)
    for _ in range(steps):
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + GOLDEN * (hi - lo))
        x1n = np.where(left, hi - GOLDEN * (hi - lo), x2)
        fx = func(np.where(left, x1n, x2n))
        f1, f2 = np.where(left, fx, f2), np.where(left, f1, fx)
        x1, x2 = x1n, x2n
    best = np.where(f1 >= f2, x1, x2)
    return best, func(best)


def _sample_grid(degree: int, weight_exponent: int) -> np.ndarray:
    count = max(64 * (degree + weight_exponent), 256)
    return np.linspace(0.0, np.pi, count + 1)


def _local_extrema(vals: np.ndarray, sign: float) -> np.ndarray:
    v = sign * vals
    interior = np.nonzero((v[1:-1] >= v[:-2]) & (v[1:-1] > v[2:]))[0] + 1
    return interior


def max_abs(p: ChebSeries, weight_exponent: int = 0) -> tuple[float, float]:
    """Global maximum of ``|(1 - x)^(w/2) p(x)|`` on [-1, 1] and its location.

    Dense sampling in ``theta = arccos x`` followed by golden-section
    refinement around every sampled local maximum.  The zero polynomial gives
    ``(0.0, -1.0)``.
    """
    if weight_exponent < 0:
        raise ValueError("weight exponent must be non-negative")
    if not np.any(p.coeffs):
        return 0.0, -1.0
    theta = _sample_grid(p.degree, weight_exponent)
    vals = np.abs(_weighted(p, theta, weight_exponent))
    idx = _local_extrema(vals, 1.0)
    best_i = int(np.argmax(vals))
    best_val, best_theta = float(vals[best_i]), float(theta[best_i])
    if idx.size:
        func = lambda t: np.abs(_weighted(p, t, weight_exponent))  # noqa: E731
        t_opt, f_opt = golden_maximize(func, theta[idx - 1], theta[idx + 1])
        j = int(np.argmax(f_opt))
        if f_opt[j] > best_val:
            best_val, best_theta = float(f_opt[j]), float(t_opt[j])
    return best_val, math.cos(best_theta)


def sup_norm(p: ChebSeries) -> float:
    return max_abs(p, 0)[0]


def alternation_points(p: ChebSeries, weight_exponent: int, level: float, rtol: float = 1e-8) -> list[float]:
    """Sorted points where ``(1 - x)^(w/2) p(x)`` touches one of ``0, +level, -level``.

    Every interior local extremum must touch a level and consecutive touches
    must alternate; otherwise :class:`AlternationError` is raised.
    """
    if level <= 0:
        raise ValueError("level must be positive")
    tol = rtol * level
    theta = _sample_grid(p.degree, weight_exponent)
    vals = _weighted(p, theta, weight_exponent)

    found = []  # (theta, value)
    for sign in (1.0, -1.0):
        idx = _local_extrema(vals, sign)
        if idx.size:
            func = lambda t, s=sign: s * _weighted(p, t, weight_exponent)  # noqa: E731
            t_opt, f_opt = golden_maximize(func, theta[idx - 1], theta[idx + 1])
            found.extend(zip(t_opt.tolist(), (sign * f_opt).tolist()))
    interior = len(found)
    found.append((0.0, float(vals[0])))
    found.append((math.pi, float(vals[-1])))

    touches = []
    for i, (t, v) in enumerate(found):
        if abs(v) <= tol:
            cls = 0
        elif abs(v - level) <= tol:
            cls = 1
        elif abs(v + level) <= tol:
            cls = -1
        elif i < interior:
            raise AlternationError(
                f"local extremum {v:.3e} at x={math.cos(t):.6f} misses the levels 0 and +/-{level:.3e}"
            )
        else:
            continue
        touches.append((math.cos(t), cls))

    touches.sort()
    merged = []
    for x, cls in touches:
        if merged and abs(x - merged[-1][0]) <= 1e-9 and cls == merged[-1][1]:
            continue
        merged.append((x, cls))
    if len(merged) < 2:
        raise AlternationError("fewer than two touching points: no alternation")
    for (xa, ca), (xb, cb) in zip(merged, merged[1:]):
        if ca == cb:
            raise AlternationError(f"alternation breaks between x={xa:.6f} and x={xb:.6f}")
    return [x for x, _ in merged]
