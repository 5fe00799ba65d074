"""Sharp constants, optimal kernels and kernel algebra.

A symmetric kernel ``u`` on ``{-n, ..., n}`` is stored by its half
``w_0, ..., w_n`` with ``u(m) = u(-m) = w_|m|``.  Its Fourier symbol is the
polynomial ``p_u(x) = w_0 + sum 2 w_m T_m(x)`` with ``p_u(cos t) = u_hat(t)``, and
the l2 operator norm of ``f -> grad^k (u * f)`` is the maximum over ``t`` of
``(2 - 2 cos t)^(k/2) |p_u(cos t)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from . import zolotarev
from .chebpoly import ChebSeries, cheb_coeff, deflate_at_one, interpolate, sup_norm
from .errors import DeflationError, DomainError, SquareRootError, UnsupportedCaseError

NORMALIZATION_TOL = 1e-12
SQUARE_ROOT_TOL = 1e-7
S_POLY_DEFLATION_LIMIT = 1e-8


class Restriction(str, Enum):
    UNRESTRICTED = "unrestricted"
    NONNEG_FT = "nonneg-ft"

    @classmethod
    def parse(cls, value) -> Restriction:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise DomainError(f"unknown restriction {value!r}; use 'unrestricted' or 'nonneg-ft'")


SOLVED_CELLS = frozenset(
    {
        (1, Restriction.UNRESTRICTED),
        (2, Restriction.NONNEG_FT),
        (2, Restriction.UNRESTRICTED),
        (3, Restriction.UNRESTRICTED),
        (4, Restriction.NONNEG_FT),
        (6, Restriction.NONNEG_FT),
    }
)

# Largest half width per order.  Beyond these the extremal polynomials can no
# longer be deflated reliably in double precision (k_n is quantised to one ulp
# and the triple-root remainder grows like n^4).
MAX_HALF_WIDTH = {1: 100_000, 2: 100_000, 3: 50, 4: 140, 6: 100}

ORDER3_NOTE = (
    "order 3: the symbol is the square root of Zbar2_{2n+3} built with modulus k_{2n+3}, "
    "the index that matches the constant 12/(2n+3) (1 - cn(2a))/dn(2a) at a = K(k_{2n+3})/(2n+3)"
)


def _open_cell_message(order: int, restriction: Restriction) -> str:
    if order in (1, 2, 3, 4, 6):
        return (
            f"order {order} with restriction '{restriction.value}' is an open case: "
            "no sharp constant is known for this cell"
        )
    return (
        f"order {order} is an open case: sharp constants are known only for orders 1, 2, 3, 4 and 6 "
        "(higher even orders lead beyond Zolotarev polynomials)"
    )


@dataclass(frozen=True)
class ProblemSpec:
    order: int
    half_width: int
    restriction: Restriction = Restriction.NONNEG_FT

    def __post_init__(self):
        object.__setattr__(self, "restriction", Restriction.parse(self.restriction))
        if int(self.order) != self.order or self.order < 1:
            raise DomainError(f"order must be a positive integer, got {self.order!r}")
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise DomainError(f"half width must be a positive integer, got {self.half_width!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "half_width", int(self.half_width))
        if (self.order, self.restriction) not in SOLVED_CELLS:
            raise UnsupportedCaseError(_open_cell_message(self.order, self.restriction))
        limit = MAX_HALF_WIDTH[self.order]
        if self.half_width > limit:
            raise DomainError(f"half width {self.half_width} exceeds the supported maximum {limit} for order {self.order}")


@dataclass(frozen=True, eq=False)
class Kernel:
    """Symmetric kernel stored by its half ``w_0, ..., w_n``.

    Normalisation ``w_0 + 2 sum w_m = 1`` is not enforced so that unnormalised
    kernels can be fed to the norm routines; see :meth:`normalization_error`.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        if w.ndim != 1 or w.size == 0:
            raise DomainError("kernel weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise DomainError("kernel weights must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def half_width(self) -> int:
        return self.weights.size - 1

    def full(self) -> np.ndarray:
        """Values ``u(-n), ..., u(n)``."""
        return np.concatenate([self.weights[:0:-1], self.weights])

    def total(self) -> float:
        return float(self.weights[0] + 2.0 * math.fsum(self.weights[1:]))

    def normalization_error(self) -> float:
        return abs(self.total() - 1.0)

    def normalized(self) -> Kernel:
        return Kernel(self.weights / self.total())

    def __repr__(self) -> str:
        return f"Kernel(half_width={self.half_width}, weights={np.array2string(self.weights, precision=6)})"


def symbol(u: Kernel) -> ChebSeries:
    """Fourier symbol ``p_u`` with ``c_0 = w_0`` and ``c_m = 2 w_m``."""
    c = 2.0 * u.weights
    c[0] = u.weights[0]
    return ChebSeries(c)


def kernel_from_symbol(p: ChebSeries, half_width: int) -> Kernel:
    """Weights ``(1/pi) int p T_m dx / sqrt(1 - x^2)`` for ``m = 0..half_width``.

    Uses ``2 n + 2`` Gauss-Chebyshev nodes, exact for degree ``p <= n``.
    """
    if p.degree > half_width:
        raise DomainError("symbol degree exceeds the kernel half width")
    nodes = 2 * half_width + 2
    return Kernel([cheb_coeff(p, m, nodes) for m in range(half_width + 1)])


# ---------------------------------------------------------------------------
# constants


def sharp_constant(spec: ProblemSpec) -> float:
    """Smallest operator norm over normalised kernels for ``spec``."""
    n = spec.half_width
    cell = (spec.order, spec.restriction)
    if cell == (1, Restriction.UNRESTRICTED):
        return 2.0 / (2 * n + 1)
    if cell == (2, Restriction.NONNEG_FT):
        return 4.0 / (n + 1) ** 2
    if cell == (2, Restriction.UNRESTRICTED):
        return 4.0 / (n + 1) * math.tan(math.pi / (4 * (n + 1)))
    if cell == (4, Restriction.NONNEG_FT):
        return 64.0 / (n + 2) ** 2 * math.tan(math.pi / (2 * n + 4)) ** 2
    if cell == (6, Restriction.NONNEG_FT):
        return 144.0 / (n + 3) ** 2 * zolotarev.solve_modulus(n + 3).amp
    if cell == (3, Restriction.UNRESTRICTED):
        return 12.0 / (2 * n + 3) * math.sqrt(zolotarev.solve_modulus(2 * n + 3).amp)
    raise UnsupportedCaseError(_open_cell_message(*cell))  # pragma: no cover


# ---------------------------------------------------------------------------
# extremal polynomials


def _chebbar_arg(n: int, x):
    """``L(x) = (1 + cos(pi/n))/2 (x + 1) - 1``, mapping 1 to cos(pi/n) where T_n = -1."""
    return 0.5 * (1.0 + math.cos(math.pi / n)) * (np.asarray(x, dtype=float) + 1.0) - 1.0


def chebbar(n: int, x):
    """``1 + T_n(L(x))``, computed as ``2 cos^2(n arccos L / 2)``."""
    phi = np.arccos(np.clip(_chebbar_arg(n, x), -1.0, 1.0))
    out = 2.0 * np.cos(0.5 * n * phi) ** 2
    return float(out) if np.ndim(out) == 0 else out


def s_poly_deflation(n: int) -> tuple[ChebSeries, tuple[float, float]]:
    """Build ``S_{n-2}`` and report the two deflation remainders."""
    if n < 2:
        raise DomainError("s_poly needs n >= 2")
    alpha = 8.0 / n**2 * math.tan(math.pi / (2 * n)) ** 2
    p = interpolate(lambda x: chebbar(n, x), n)
    remainders = []
    for _ in range(2):
        p, r = deflate_at_one(p)
        remainders.append(r)
    worst = max(abs(r) for r in remainders)
    if worst > S_POLY_DEFLATION_LIMIT:
        raise DeflationError(f"S_{n - 2}: deflation remainder {worst:.3e}")
    return p * alpha, tuple(remainders)


@lru_cache(maxsize=256)
def s_poly(n: int) -> ChebSeries:
    """``S_{n-2}``: degree n-2, value 1 at x = 1, minimising max (1-x)^2 |p|."""
    return s_poly_deflation(n)[0]


def _order2_unrestricted_symbol(n: int) -> ChebSeries:
    # 1 + T_{2N'} = 2 T_{N'}^2 with N' = n + 1, so S_{2n} is the square of
    # T_{n+1}(L(x)) / (1 - x) up to scale; L(1) is the top zero of T_{n+1}
    big_n = 2 * n + 2
    mid = n + 1

    def top(x):
        return np.cos(mid * np.arccos(np.clip(_chebbar_arg(big_n, x), -1.0, 1.0)))

    q, r = deflate_at_one(interpolate(top, mid))
    if abs(r) > S_POLY_DEFLATION_LIMIT:
        raise DeflationError(f"order-2 symbol: deflation remainder {r:.3e}")
    return q * (1.0 / q(1.0))


def _order3_symbol(n: int) -> ChebSeries:
    params = zolotarev.solve_modulus(2 * n + 3)
    roots = zolotarev.touch_points(params)
    if len(roots) != n:
        raise SquareRootError(f"expected {n} touch points of Zbar2_{2 * n + 3}, found {len(roots)}")
    p = ChebSeries(npcheb.chebfromroots(roots))
    p = p * (1.0 / p(1.0))
    residual = sup_norm(p * p - zolotarev.zbar_series(2 * n + 3))
    if residual > SQUARE_ROOT_TOL:
        raise SquareRootError(f"square root of Zbar2_{2 * n + 3} misses by {residual:.3e}")
    return p


def optimal_symbol(spec: ProblemSpec) -> ChebSeries:
    """The extremal polynomial ``p_u`` of the optimal kernel for ``spec``."""
    n = spec.half_width
    cell = (spec.order, spec.restriction)
    if cell == (1, Restriction.UNRESTRICTED):
        return symbol(Kernel(np.full(n + 1, 1.0 / (2 * n + 1))))
    if cell == (2, Restriction.NONNEG_FT):
        return symbol(Kernel((n + 1 - np.arange(n + 1)) / (n + 1) ** 2))
    if cell == (2, Restriction.UNRESTRICTED):
        return _order2_unrestricted_symbol(n)
    if cell == (4, Restriction.NONNEG_FT):
        return s_poly(n + 2)
    if cell == (6, Restriction.NONNEG_FT):
        return zolotarev.zbar_series(n + 3)
    if cell == (3, Restriction.UNRESTRICTED):
        return _order3_symbol(n)
    raise UnsupportedCaseError(_open_cell_message(*cell))  # pragma: no cover


def optimal_kernel(spec: ProblemSpec) -> Kernel:
    """The unique kernel attaining :func:`sharp_constant`."""
    n = spec.half_width
    if spec.order == 1:
        return Kernel(np.full(n + 1, 1.0 / (2 * n + 1)))
    if (spec.order, spec.restriction) == (2, Restriction.NONNEG_FT):
        return Kernel((n + 1 - np.arange(n + 1)) / (n + 1) ** 2)
    return kernel_from_symbol(optimal_symbol(spec), n)


# ---------------------------------------------------------------------------
# kernel algebra and smoothing


def convolve(u: Kernel, v: Kernel) -> Kernel:
    """Symmetric convolution ``u * v`` of half width ``u.n + v.n``."""
    full = np.convolve(u.full(), v.full())
    return Kernel(full[u.half_width + v.half_width:])


def indicator(half_width: int) -> Kernel:
    """Constant kernel ``1/(2m+1)`` on ``{-m, ..., m}``."""
    if half_width < 0:
        raise DomainError("half width must be non-negative")
    return Kernel(np.full(half_width + 1, 1.0 / (2 * half_width + 1)))


def indicator_power(ell: int, n: int) -> Kernel:
    """Self-convolution of a normalised indicator with operator norm ``(2/(1+2n/ell))^ell`` at order ell.

    ``n`` may be any positive multiple of ``ell/2``.  The kernel is the
    convolution of ``ell/2`` copies of the indicator of ``{0, ..., 2n/ell}``
    with ``ell/2`` reflected copies; for ``n`` divisible by ``ell`` this is
    the ``ell``-fold power of the centred indicator of half width ``n/ell``.
    """
    if ell < 2 or ell % 2:
        raise DomainError("ell must be an even integer >= 2")
    if n < 1 or (2 * n) % ell:
        raise DomainError(f"n must be a positive multiple of ell/2 = {ell // 2}, got {n}")
    length = 2 * n // ell + 1
    box = np.full(length, 1.0 / length)
    full = np.ones(1)
    for _ in range(ell):
        full = np.convolve(full, box)
    # ell one-sided boxes of support 0..2n/ell span 0..2n; recentring gives -n..n
    return Kernel(full[n:])


def smooth(data, u: Kernel, edge: str = "reflect") -> np.ndarray:
    """Convolve ``data`` with ``u``; ``edge`` is one of reflect, extend, zero."""
    f = np.asarray(data, dtype=float).reshape(-1)
    if f.size == 0:
        raise DomainError("cannot smooth an empty series")
    modes = {"reflect": "reflect", "extend": "edge", "zero": "constant"}
    if edge not in modes:
        raise DomainError(f"unknown edge policy {edge!r}; use reflect, extend or zero")
    n = u.half_width
    if n == 0:
        return f * u.weights[0]
    if f.size == 1 and edge == "reflect":
        padded = np.full(f.size + 2 * n, f[0])
    else:
        padded = np.pad(f, n, mode=modes[edge])
    return np.convolve(padded, u.full(), mode="valid")
