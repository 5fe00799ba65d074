"""Complete elliptic integrals, Jacobi elliptic functions and Jacobi Zeta.

Everything is real-valued with modulus ``0 < k < 1``.  K and E come from the
arithmetic-geometric mean; sn, cn, dn and Z come from the descending Landen
sequence with phase back-substitution (Abramowitz & Stegun 16.4 and 17.6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

K_MAX = 1.0 - 1e-12
# a few ulps; a and b can stall one ulp apart in double precision
AGM_RTOL = 4.0 * 2.0**-52
LANDEN_MAX_DEPTH = 32


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus with its complete integrals cached."""

    k: float
    k_prime: float
    big_K: float
    big_E: float


@dataclass(frozen=True)
class JacobiTriple:
    sn: float
    cn: float
    dn: float


def _agm_complete(k: float, k_prime: float) -> tuple[float, float]:
    a, b = 1.0, k_prime
    csum = 0.5 * k * k
    weight = 0.5
    for _ in range(LANDEN_MAX_DEPTH):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        weight *= 2.0
        csum += weight * c * c
        if abs(a - b) <= AGM_RTOL * a:
            break
    else:
        raise ConvergenceError(f"AGM did not converge for k={k!r}")
    big_K = math.pi / (2.0 * a)
    return big_K, big_K * (1.0 - csum)


@lru_cache(maxsize=4096)
def make_modulus(k: float) -> Modulus:
    """Build a :class:`Modulus` for ``0 < k < 1``.

    Moduli closer to 1 than ``1e-12`` are rejected because K diverges there.
    """
    k = float(k)
    if not (0.0 < k <= K_MAX):
        raise DomainError(f"elliptic modulus must lie in (0, 1 - 1e-12], got {k!r}")
    k_prime = math.sqrt((1.0 - k) * (1.0 + k))
    big_K, big_E = _agm_complete(k, k_prime)
    return Modulus(k=k, k_prime=k_prime, big_K=big_K, big_E=big_E)


def _landen_phases(u: float, m: Modulus) -> tuple[list[float], list[float]]:
    """Return the phases phi_0..phi_N and the sequence c_0..c_N."""
    a_seq = [1.0]
    c_seq = [m.k]
    a, b = 1.0, m.k_prime
    while abs(c_seq[-1]) > AGM_RTOL * a_seq[-1]:
        if len(a_seq) > LANDEN_MAX_DEPTH:
            raise ConvergenceError("descending Landen sequence exceeded depth 32")
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    depth = len(a_seq) - 1
    phi = math.ldexp(a_seq[depth] * u, depth)
    phases = [phi]
    for n in range(depth, 0, -1):
        phi = 0.5 * (phi + math.asin(c_seq[n] / a_seq[n] * math.sin(phi)))
        phases.append(phi)
    phases.reverse()
    return phases, c_seq


def amplitude(u: float, m: Modulus) -> float:
    """Jacobi amplitude am(u, k)."""
    return _landen_phases(float(u), m)[0][0]


def jacobi(u: float, m: Modulus) -> JacobiTriple:
    """sn, cn and dn at real argument ``u``."""
    phi0 = amplitude(u, m)
    sn = math.sin(phi0)
    ksn = m.k * sn
    dn = math.sqrt((1.0 - ksn) * (1.0 + ksn))
    return JacobiTriple(sn=sn, cn=math.cos(phi0), dn=dn)


def jacobi_zeta(u: float, m: Modulus) -> float:
    """Jacobi Zeta function Z(u, k) for ``u`` in ``[0, K]``."""
    u = float(u)
    slack = 1e-14 * m.big_K
    if u < -slack or u > m.big_K + slack:
        raise DomainError(f"jacobi_zeta needs u in [0, K={m.big_K}], got {u!r}")
    phases, c_seq = _landen_phases(min(max(u, 0.0), m.big_K), m)
    return math.fsum(c_seq[n] * math.sin(phases[n]) for n in range(1, len(phases)))


def solve_K_eq_2E() -> Modulus:
    """Modulus k* with K(k*) = 2 E(k*), the large-degree limit of k_n."""

    def gap(k):
        mod = make_modulus(k)
        return mod.big_K - 2.0 * mod.big_E

    lo, hi = 0.5, 0.99
    if gap(lo) * gap(hi) > 0:
        raise ConvergenceError("K - 2E does not change sign on [0.5, 0.99]")
    k_star = brentq(gap, lo, hi, xtol=1e-16, rtol=4 * 2.0**-52, maxiter=200)
    return make_modulus(k_star)
