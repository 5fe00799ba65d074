import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skern.chebpoly import ChebSeries
from skern.errors import DomainError, FactorizationError
from skern.kernels import Kernel, ProblemSpec, indicator, optimal_kernel, sharp_constant, symbol
from skern.verify import (
    brute_min,
    check_relation,
    eval_on_circle,
    fejer_riesz,
    fejer_riesz_roots,
    operator_norm,
    rayleigh,
    witness,
)


def dense_norm(u, order, count=1_000_001):
    t = np.linspace(0, np.pi, count)
    return float(np.max(np.abs(2 * np.sin(t / 2)) ** order * np.abs(symbol(u)(np.cos(t)))))


def test_norm_of_identity_kernel():
    # u = delta: multiplier (2 sin(t/2))^k peaks at t = pi with value 2^k
    for order in (1, 2, 5):
        res = operator_norm(Kernel([1.0]), order)
        assert res.value == pytest.approx(2.0**order, rel=1e-15)
        assert res.arg_theta == pytest.approx(math.pi)


def test_norm_of_indicator():
    assert operator_norm(indicator(1), 1).value == pytest.approx(2 / 3, abs=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_norm_matches_dense_scan(seed):
    rng = np.random.default_rng(seed)
    u = Kernel(rng.normal(size=6))
    for order in (1, 2, 3, 6):
        assert operator_norm(u, order).value == pytest.approx(dense_norm(u, order), rel=1e-9)


def test_norm_rejects_order_zero():
    with pytest.raises(DomainError):
        operator_norm(Kernel([1.0]), 0)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=8), st.floats(-5, 5), st.integers(1, 6))
def test_norm_scales_with_kernel(w, c, order):
    u = Kernel(w)
    base = operator_norm(u, order).value
    assert operator_norm(Kernel(c * np.asarray(w)), order).value == pytest.approx(abs(c) * base, rel=1e-9, abs=1e-12)


def test_rayleigh_hand_example():
    # indicator(1) on a delta gives g = (1/3, 1/3, 1/3); first differences (1/3, 0, 0, -1/3)
    f = np.array([1.0])
    assert rayleigh(indicator(1), 1, f) == pytest.approx(math.sqrt(2) / 3, abs=1e-15)
    with pytest.raises(DomainError):
        rayleigh(indicator(1), 1, np.zeros(4))


def test_rayleigh_never_exceeds_the_norm():
    rng = np.random.default_rng(99)
    for _ in range(500):
        order = int(rng.integers(1, 7))
        u = Kernel(rng.normal(size=int(rng.integers(1, 7))))
        f = rng.normal(size=int(rng.integers(1, 60)))
        assert rayleigh(u, order, f) <= operator_norm(u, order).value * (1 + 1e-12)


@settings(max_examples=30)
@given(st.integers(1, 5), st.lists(st.floats(-1, 1), min_size=1, max_size=30).filter(lambda f: any(abs(v) > 1e-3 for v in f)))
def test_rayleigh_is_shift_and_scale_invariant(order, f):
    u = optimal_kernel(ProblemSpec(2, 3))
    f = np.asarray(f)
    base = rayleigh(u, order, f)
    assert rayleigh(u, order, -3.0 * f) == pytest.approx(base, rel=1e-12)
    assert rayleigh(u, order, np.concatenate([np.zeros(5), f])) == pytest.approx(base, rel=1e-12)


@pytest.mark.parametrize("spec", [ProblemSpec(1, 5, "unrestricted"), ProblemSpec(4, 5), ProblemSpec(6, 5), ProblemSpec(3, 2, "unrestricted")])
def test_witness_approaches_the_constant(spec):
    u = optimal_kernel(spec)
    ratio = rayleigh(u, spec.order, witness(u, spec.order, 10_000)) / sharp_constant(spec)
    assert 0.99 <= ratio <= 1 + 1e-12


def _gap(u, order, width, window):
    return operator_norm(u, order).value - rayleigh(u, order, witness(u, order, width, window))


def test_witness_gap_rates():
    u = optimal_kernel(ProblemSpec(4, 4))
    boxcar = _gap(u, 4, 8000, "boxcar") / _gap(u, 4, 4000, "boxcar")
    fejer = _gap(u, 4, 8000, "fejer") / _gap(u, 4, 4000, "fejer")
    assert 0.3 <= boxcar <= 0.7
    assert fejer == pytest.approx(0.25, abs=0.03)


def test_witness_arguments():
    u = indicator(2)
    with pytest.raises(DomainError):
        witness(u, 2, 5)
    with pytest.raises(DomainError):
        witness(u, 2, 50, window="hann")
    assert witness(u, 2, 50).shape == (101,)


@pytest.mark.parametrize(
    "spec", [ProblemSpec(1, 1, "unrestricted"), ProblemSpec(2, 1), ProblemSpec(2, 1, "unrestricted"), ProblemSpec(1, 2, "unrestricted")]
)
def test_brute_min_recovers_constant(spec):
    value = brute_min(spec, resolution=400)
    assert value >= sharp_constant(spec) * (1 - 1e-9)
    assert value == pytest.approx(sharp_constant(spec), abs=2e-3)


def test_brute_min_arguments():
    with pytest.raises(DomainError):
        brute_min(ProblemSpec(2, 3))
    with pytest.raises(DomainError):
        brute_min(ProblemSpec(2, 1), resolution=1)


def test_fejer_riesz_of_one_plus_x():
    # 1 + cos t = |1 + e^{it}|^2 / 2, a double root on the circle
    q = fejer_riesz(ChebSeries([1.0, 1.0]))
    assert q.size == 2
    np.testing.assert_allclose(np.abs(q), [1 / math.sqrt(2)] * 2, atol=1e-6)
    t = np.linspace(0, np.pi, 101)
    np.testing.assert_allclose(np.abs(eval_on_circle(q, t)) ** 2, 1 + np.cos(t), atol=1e-10)


def test_fejer_riesz_constant_and_root_placement():
    q = fejer_riesz(ChebSeries([4.0]))
    np.testing.assert_allclose(q, [2.0])
    # 5/4 + cos t = |(e^{it} + 2) / 2|^2, so the outer root is -2 and the scale 1/2
    scale, roots = fejer_riesz_roots(ChebSeries([1.25, 1.0]))
    np.testing.assert_allclose(roots, [-2.0], atol=1e-12)
    assert scale == pytest.approx(0.5, rel=1e-12)


def test_fejer_riesz_random_roundtrip():
    rng = np.random.default_rng(3)
    worst = 0.0
    t = np.linspace(0, np.pi, 257)
    for _ in range(200):
        deg = int(rng.integers(1, 9))
        mod = rng.uniform(1.05, 3.0, size=deg)
        ang = rng.uniform(0, 2 * np.pi, size=deg)
        q = np.poly(mod * np.exp(1j * ang))[::-1] * rng.uniform(0.5, 2)
        # |Q(e^{it})|^2 as a cosine series via its autocorrelation
        auto = np.convolve(q, np.conj(q[::-1]))
        c = np.real(auto[deg:]) * 2
        c[0] /= 2
        p = ChebSeries(c)
        q2 = fejer_riesz(p)
        assert np.all(np.abs(np.roots(q2[::-1])) >= 1 - 1e-9)
        target = p(np.cos(t))
        worst = max(worst, float(np.max(np.abs(np.abs(eval_on_circle(q2, t)) ** 2 - target)) / np.max(target)))
    assert worst <= 1e-10


def test_fejer_riesz_of_optimal_symbol():
    p = symbol(optimal_kernel(ProblemSpec(4, 6)))
    q = fejer_riesz(p)
    t = np.linspace(0, np.pi, 1001)
    assert np.max(np.abs(np.abs(eval_on_circle(q, t)) ** 2 - p(np.cos(t)))) <= 1e-8


def test_fejer_riesz_refuses_negative_symbols():
    with pytest.raises(FactorizationError):
        fejer_riesz(ChebSeries([0.0, 1.0]))


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_relation_between_orders(order, n):
    lhs, rhs, gap = check_relation(order, n)
    assert lhs == pytest.approx(rhs, abs=1e-9)
    assert gap <= 1e-6


def test_relation_orders_outside_range():
    with pytest.raises(DomainError):
        check_relation(4, 2)
