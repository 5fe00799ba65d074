"""Hot numeric loops.

Each kernel exists twice: a loop version compiled with numba and a vectorised
numpy version.  The module-level names without suffix point at whichever
backend :mod:`skern._accel` selected; both variants are importable so the test
suite and the benchmark can compare them directly.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# Clenshaw summation of sum_m c_m T_m(x)


@njit(cache=True)
def clenshaw_nb(coeffs, x):
    out = np.empty(x.shape[0])
    n = coeffs.shape[0]
    for i in range(x.shape[0]):
        xi = x[i]
        b1 = 0.0
        b2 = 0.0
        for m in range(n - 1, 0, -1):
            b0 = coeffs[m] + 2.0 * xi * b1 - b2
            b2 = b1
            b1 = b0
        out[i] = coeffs[0] + xi * b1 - b2
    return out


def clenshaw_np(coeffs, x):
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for m in range(coeffs.shape[0] - 1, 0, -1):
        b1, b2 = coeffs[m] + 2.0 * x * b1 - b2, b1
    return coeffs[0] + x * b1 - b2


# ---------------------------------------------------------------------------
# Fourier multiplier |2 sin(t/2)|^order |p(cos t)| on a grid of angles in [0, pi]
# (the same as (2 - 2 cos t)^(order/2) |p(cos t)|, without cancellation near 0)


@njit(cache=True)
def multiplier_nb(coeffs, theta, order):
    x = np.cos(theta)
    vals = clenshaw_nb(coeffs, x)
    out = np.empty(theta.shape[0])
    for i in range(theta.shape[0]):
        out[i] = abs(2.0 * math.sin(0.5 * theta[i])) ** order * abs(vals[i])
    return out


def multiplier_np(coeffs, theta, order):
    return np.abs(2.0 * np.sin(0.5 * theta)) ** order * np.abs(clenshaw_np(coeffs, np.cos(theta)))


# ---------------------------------------------------------------------------
# Batch of small kernels: for each candidate weight vector, the maximum of the
# multiplier on a fixed angle grid and the minimum of the symbol.  Used by the
# brute-force oracle.  ``cos_table[m, j] = cos(m * theta_j)``.


@njit(cache=True)
def batch_norms_nb(weights, cos_table, mult_factor):
    ncand = weights.shape[0]
    nw = weights.shape[1]
    ntheta = cos_table.shape[1]
    best = np.empty(ncand)
    lowest = np.empty(ncand)
    for c in range(ncand):
        vmax = 0.0
        vmin = np.inf
        for j in range(ntheta):
            s = weights[c, 0]
            for m in range(1, nw):
                s += 2.0 * weights[c, m] * cos_table[m, j]
            v = mult_factor[j] * abs(s)
            if v > vmax:
                vmax = v
            if s < vmin:
                vmin = s
        best[c] = vmax
        lowest[c] = vmin
    return best, lowest


def batch_norms_np(weights, cos_table, mult_factor, chunk=4096):
    ncand = weights.shape[0]
    best = np.empty(ncand)
    lowest = np.empty(ncand)
    coef = weights.copy()
    coef[:, 1:] *= 2.0
    for start in range(0, ncand, chunk):
        sym = coef[start:start + chunk] @ cos_table
        best[start:start + chunk] = (np.abs(sym) * mult_factor).max(axis=1)
        lowest[start:start + chunk] = sym.min(axis=1)
    return best, lowest


# ---------------------------------------------------------------------------
# Composite Gauss-Legendre quadrature of
#     (1 - cos t) / sqrt((cos t - gamma)^2 + eps^2)   over [0, upper]
# for an array of upper limits.  ``nodes``/``wts`` are the rule on [0, 1].
# The pole pair sits just outside x = 1, so the kernels take ``gm1 = gamma - 1``
# and form ``cos t - gamma = -(2 sin^2(t/2) + gm1)`` without cancellation.


@njit(cache=True)
def arc_quadrature_nb(upper, gm1, eps, panels_per_unit, nodes, wts):
    out = np.empty(upper.shape[0])
    eps2 = eps * eps
    for i in range(upper.shape[0]):
        top = upper[i]
        npanel = max(1, int(math.ceil(top * panels_per_unit)))
        h = top / npanel
        total = 0.0
        for p in range(npanel):
            left = p * h
            acc = 0.0
            for q in range(nodes.shape[0]):
                t = left + h * nodes[q]
                st = math.sin(0.5 * t)
                one_minus_cos = 2.0 * st * st
                d = one_minus_cos + gm1
                acc += wts[q] * one_minus_cos / math.sqrt(d * d + eps2)
            total += h * acc
        out[i] = total
    return out


def arc_quadrature_np(upper, gm1, eps, panels_per_unit, nodes, wts):
    out = np.empty(upper.shape[0])
    for i, top in enumerate(upper):
        npanel = max(1, int(math.ceil(top * panels_per_unit)))
        h = top / npanel
        t = (np.arange(npanel)[:, None] + nodes[None, :]) * h
        one_minus_cos = 2.0 * np.sin(0.5 * t) ** 2
        f = one_minus_cos / np.sqrt((one_minus_cos + gm1) ** 2 + eps * eps)
        out[i] = h * float(np.sum(f @ wts))
    return out


if USE_NUMBA:
    clenshaw = clenshaw_nb
    multiplier = multiplier_nb
    batch_norms = batch_norms_nb
    arc_quadrature = arc_quadrature_nb
else:
    clenshaw = clenshaw_np
    multiplier = multiplier_np
    batch_norms = batch_norms_np
    arc_quadrature = arc_quadrature_np
