"""Independent checks on kernels and constants.

Nothing here calls the closed forms in :mod:`skern.kernels` to compute a norm:
operator norms come from the multiplier definition, Rayleigh quotients from
explicit sequence convolution, and the brute-force search from a grid over the
free weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chebpoly import ChebSeries, golden_maximize, sup_norm
from .errors import DomainError, FactorizationError
from .kernels import (
    Kernel,
    ProblemSpec,
    Restriction,
    convolve,
    optimal_kernel,
    sharp_constant,
    symbol,
)

NONNEG_TOL = 1e-12
ON_CIRCLE_TOL = 1e-6


@dataclass(frozen=True)
class NormResult:
    value: float
    arg_theta: float
    refinements: int


def _multiplier(coeffs: np.ndarray, order: int):
    return lambda t: _kernels.multiplier(coeffs, np.ascontiguousarray(np.atleast_1d(t), dtype=float), order)


def operator_norm(u: Kernel, order: int) -> NormResult:
    """``max_t (2 - 2 cos t)^(order/2) |p_u(cos t)|`` over ``t`` in ``[0, pi]``.

    A uniform grid of at least ``128 (n + order)`` angles locates the local
    maxima, each of which is polished by golden-section search.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    coeffs = symbol(u).coeffs
    func = _multiplier(coeffs, order)
    count = max(128 * (u.half_width + order), 512)
    theta = np.linspace(0.0, np.pi, count + 1)
    vals = func(theta)
    best = int(np.argmax(vals))
    value, arg = float(vals[best]), float(theta[best])
    interior = np.nonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:]))[0] + 1
    refinements = 0
    # only maxima that could beat the best sample need polishing
    keep = interior[vals[interior] >= value * (1.0 - 1e-3)]
    if keep.size:
        t_opt, f_opt = golden_maximize(func, theta[keep - 1], theta[keep + 1])
        refinements = int(keep.size)
        j = int(np.argmax(f_opt))
        if f_opt[j] > value:
            value, arg = float(f_opt[j]), float(t_opt[j])
    return NormResult(value=value, arg_theta=arg, refinements=refinements)


def _nabla_power(g: np.ndarray, order: int) -> np.ndarray:
    return np.diff(np.pad(g, (order, order)), order)


def rayleigh(u: Kernel, order: int, f) -> float:
    """``||grad^order (u * f)||_2 / ||f||_2`` for a finitely supported ``f``."""
    f = np.asarray(f, dtype=float).reshape(-1)
    norm_f = np.linalg.norm(f)
    if norm_f == 0.0:
        raise DomainError("rayleigh quotient needs a nonzero sequence")
    g = np.convolve(f, u.full())
    return float(np.linalg.norm(_nabla_power(g, order)) / norm_f)


def witness(u: Kernel, order: int, width: int, window: str = "fejer") -> np.ndarray:
    """Test sequence whose Rayleigh quotient tends to the operator norm.

    A cosine carrier at the maximising frequency under a triangular (Fejer)
    window of half length ``width``; ``window="boxcar"`` uses a flat window.
    The gap to the norm decays like ``width**-2`` for the Fejer window and
    like ``width**-1`` for the boxcar.
    """
    if width < 10:
        raise DomainError("witness width must be at least 10")
    theta = operator_norm(u, order).arg_theta
    j = np.arange(-width, width + 1, dtype=float)
    if window == "fejer":
        w = 1.0 - np.abs(j) / (width + 1)
    elif window == "boxcar":
        w = np.ones_like(j)
    else:
        raise DomainError(f"unknown window {window!r}")
    return w * np.cos(theta * j)


# ---------------------------------------------------------------------------
# brute force


def _candidate_grid(centers, half_span, resolution):
    axes = [np.linspace(c - half_span, c + half_span, resolution + 1) for c in centers]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _scan(free: np.ndarray, cos_table, mult, nonneg: bool):
    weights = np.empty((free.shape[0], free.shape[1] + 1))
    weights[:, 1:] = free
    weights[:, 0] = 1.0 - 2.0 * free.sum(axis=1)
    best, lowest = _kernels.batch_norms(np.ascontiguousarray(weights), cos_table, mult)
    if nonneg:
        best = np.where(lowest >= -NONNEG_TOL, best, np.inf)
    return weights, best


def brute_min(spec: ProblemSpec, resolution: int = 2000, span: float = 1.0) -> float:
    """Grid search of the operator norm over normalised kernels of half width <= 2.

    The free weights ``w_1[, w_2]`` range over ``[-span, span]`` with
    ``resolution + 1`` points per axis; a second pass zooms in on the best
    cell.  For ``nonneg-ft`` candidates whose symbol dips below ``-1e-12`` on a
    512-angle grid are rejected and the winner is re-checked on 4096 angles.
    """
    n = spec.half_width
    if n > 2:
        raise DomainError("brute_min supports half widths 1 and 2 only")
    if not 2 <= resolution <= 2000:
        raise DomainError("resolution must lie in [2, 2000]")
    nonneg = spec.restriction is Restriction.NONNEG_FT
    per_axis = resolution
    theta = np.linspace(0.0, np.pi, 512)
    cos_table = np.ascontiguousarray(np.cos(np.outer(np.arange(n + 1), theta)))
    mult = np.abs(2.0 * np.sin(0.5 * theta)) ** spec.order

    centers = np.zeros(n)
    half_span = span
    for _ in range(2):
        free = _candidate_grid(centers, half_span, per_axis)
        weights, best = _scan(free, cos_table, mult, nonneg)
        order = np.argsort(best, kind="stable")
        step = 2.0 * half_span / per_axis
        centers = weights[order[0], 1:]
        half_span = 4.0 * step

    fine = np.linspace(0.0, np.pi, 4096)
    cos_fine = np.cos(np.outer(np.arange(n + 1), fine))
    for idx in order[:64]:
        if not np.isfinite(best[idx]):
            break
        w = weights[idx]
        if nonneg:
            sym = w[0] + 2.0 * (w[1:] @ cos_fine[1:])
            if sym.min() < -NONNEG_TOL:
                continue
        return operator_norm(Kernel(w), spec.order).value
    raise DomainError("no admissible kernel on the search grid")


# ---------------------------------------------------------------------------
# spectral factorisation


def fejer_riesz_roots(p: ChebSeries, on_circle_tol: float = ON_CIRCLE_TOL) -> tuple[float, np.ndarray]:
    """Scale ``C`` and roots ``r_i`` with ``p(cos t) = |C prod (e^{it} - r_i)|^2``.

    Roots of ``z^N u_hat(z)`` come in pairs ``r, 1/conj(r)``; the one outside
    the unit disk is kept.  Roots within ``on_circle_tol`` of the circle are
    paired by proximity and each pair contributes one root.
    """
    c = p.coeffs
    deg = c.size - 1
    grid = np.cos(np.linspace(0.0, np.pi, 64 * (deg + 1) + 1))
    if p(grid).min() < -1e-10:
        raise FactorizationError("symbol takes negative values on [-1, 1]")
    if deg == 0:
        return math.sqrt(max(c[0], 0.0)), np.empty(0, dtype=complex)
    # z^N u_hat(z): coefficient of z^(N +- m) is c_m / 2, of z^N is c_0
    laurent = np.empty(2 * deg + 1)
    laurent[deg] = c[0]
    laurent[deg + 1:] = 0.5 * c[1:]
    laurent[:deg] = 0.5 * c[:0:-1]
    roots = np.roots(laurent[::-1])
    mod = np.abs(roots)
    outside = list(roots[mod > 1.0 + on_circle_tol])
    circle = list(roots[np.abs(mod - 1.0) <= on_circle_tol])
    inside = roots[mod < 1.0 - on_circle_tol]
    if len(outside) != len(inside):
        raise FactorizationError("roots off the unit circle do not pair up")
    chosen = list(outside)
    while circle:
        r = circle.pop(0)
        if not circle:
            raise FactorizationError("odd multiplicity root on the unit circle")
        dist = [abs(r - s) for s in circle]
        j = int(np.argmin(dist))
        if dist[j] > math.sqrt(on_circle_tol):
            raise FactorizationError(f"unpaired root on the unit circle at angle {np.angle(r):.6f}")
        mid = 0.5 * (r + circle.pop(j))
        chosen.append(mid / abs(mid))
    if len(chosen) != deg:
        raise FactorizationError("wrong number of factor roots")
    chosen = np.array(chosen, dtype=complex)
    scale = math.sqrt(abs(laurent[-1]) / float(np.prod(np.abs(chosen))))
    return scale, chosen


def fejer_riesz(p: ChebSeries, on_circle_tol: float = ON_CIRCLE_TOL) -> np.ndarray:
    """Coefficients ``q_0, ..., q_N`` (ascending) with ``|Q(e^{it})|^2 = p(cos t)``.

    All roots of ``Q`` lie outside the open unit disk.  Roots on the circle
    must come in pairs; an unpaired one raises :class:`FactorizationError`.
    """
    scale, roots = fejer_riesz_roots(p, on_circle_tol)
    # numpy.poly gives descending coefficients
    return scale * np.atleast_1d(np.poly(roots))[::-1].astype(complex)


def eval_on_circle(q: np.ndarray, theta) -> np.ndarray:
    """``Q(e^{i theta})`` for ascending coefficients ``q``."""
    z = np.exp(1j * np.asarray(theta, dtype=float))
    return np.polyval(np.asarray(q)[::-1], z)


# ---------------------------------------------------------------------------
# k <-> 2k relation


def check_relation(order: int, n: int) -> tuple[float, float, float]:
    """Compare ``C_{k,n,1}^2`` with ``C_{2k,2n,2}`` and ``u * u`` with the order-2k optimum."""
    if order not in (1, 2, 3):
        raise DomainError("relation check is defined for orders 1, 2 and 3")
    base = ProblemSpec(order, n, Restriction.UNRESTRICTED)
    double = ProblemSpec(2 * order, 2 * n, Restriction.NONNEG_FT)
    lhs = sharp_constant(base) ** 2
    rhs = sharp_constant(double)
    u = optimal_kernel(base)
    gap = sup_norm(symbol(convolve(u, u)) - symbol(optimal_kernel(double)))
    return lhs, rhs, gap
