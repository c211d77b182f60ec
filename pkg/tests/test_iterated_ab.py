import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iteratedab.classical_ops import ONE, Multiplier, ab_integral
from iteratedab.errors import AlignmentError, DomainError
from iteratedab.fps import FracPowerSeries, SampledSignal, eval_fps, sample_fps
from iteratedab.iterated_ab import (
    CancellationWarning,
    IteratedOrder,
    binomial_weights,
    derivative_weights,
    iab_apply,
    iab_apply_fps,
    iab_apply_sampled,
    iab_derivative_fps,
    iab_iterate_check,
    identity_weight,
    kernel_weights,
    series_coefficients,
)
from iteratedab.specfun import mittag_leffler

BUMP = Multiplier(lambda a: 1.0 + a * (1.0 - a), "bump")


def abr_of_one(t, alpha=0.5, B=ONE):
    Ba = B(alpha)
    lam = alpha / (1.0 - alpha) / Ba
    return np.array([Ba / (1.0 - alpha) * mittag_leffler(alpha, -lam * Ba * x ** alpha / Ba) for x in t])


def test_order_validation():
    with pytest.raises(DomainError):
        IteratedOrder(1.0, 1.0)
    with pytest.raises(DomainError):
        IteratedOrder(-0.1, 1.0)
    with pytest.raises(DomainError):
        IteratedOrder(0.5, math.inf)
    assert IteratedOrder(0.5, 3).beta_is_natural
    assert not IteratedOrder(0.5, -3).beta_is_natural
    assert (-IteratedOrder(0.5, 2.5)).beta == -2.5


def test_series_coefficients_trivial_cases():
    for order in (IteratedOrder(0.0, 2.7), IteratedOrder(0.4, 0.0)):
        sc = series_coefficients(order, ONE, 1.0)
        assert list(sc.c) == [1.0] and sc.truncation_k == 0


def test_series_coefficients_ab_integral():
    sc = series_coefficients(IteratedOrder(0.5, 1.0), ONE, 1.0)
    assert list(sc.c) == [0.5, 0.5] and sc.truncation_k == 1


@pytest.mark.parametrize("alpha, beta", [(0.3, 0.5), (0.5, -1.0), (0.7, -2.3), (0.2, 1.7)])
def test_binomial_weights_against_mpmath(alpha, beta):
    c = binomial_weights(IteratedOrder(alpha, beta), BUMP, 12)
    Ba = mpmath.mpf(BUMP(alpha))
    for k in range(12):
        want = mpmath.binomial(beta, k) * (1 - mpmath.mpf(alpha)) ** (beta - k) * mpmath.mpf(alpha) ** k / Ba ** beta
        assert abs(c[k] - float(want)) <= 1e-13 * max(1.0, abs(float(want)))


def test_derivative_weights_match_negated_order():
    order = IteratedOrder(0.6, 1.4)
    np.testing.assert_allclose(derivative_weights(order, BUMP, 15),
                               binomial_weights(-order, BUMP, 15), rtol=1e-13, atol=0)


@pytest.mark.parametrize("alpha, beta, L", [(0.3, 0.5, 1.0), (0.5, -1.0, 4.0), (0.7, -0.5, 2.0)])
def test_truncation_tail_bound_is_honest(alpha, beta, L):
    order = IteratedOrder(alpha, beta)
    sc = series_coefficients(order, ONE, L)
    assert sc.tail_bound < 1e-15
    # the actual dropped majorant mass over the next 400 terms
    K = sc.truncation_k
    c = binomial_weights(order, ONE, K + 400)
    dropped = sum(abs(c[k]) * math.exp(k * alpha * math.log(L) - math.lgamma(k * alpha + 1)) for k in range(K + 1, K + 400))
    assert dropped <= sc.tail_bound


def test_iab_fps_example():
    out = iab_apply_fps(IteratedOrder(0.5, 1.0), ONE, FracPowerSeries(0.5, [1.0]))
    assert abs(eval_fps(out, 1.0) - 1.0641896) <= 1e-7


@pytest.mark.parametrize("beta", [1.0, -1.0, 0.3, 2.0])
def test_iab_of_zero(beta):
    out = iab_apply_fps(IteratedOrder(0.5, beta), ONE, FracPowerSeries(0.5, [0.0]))
    assert np.all(out.coeffs == 0.0)


def test_identity_reductions():
    f = FracPowerSeries(0.4, [1.0, -2.0, 0.5])
    assert iab_apply_fps(IteratedOrder(0.4, 0.0), ONE, f) is f
    assert iab_apply_fps(IteratedOrder(0.0, 2.5), ONE, f) is f
    sig = sample_fps(f, 1.0, 11)
    assert iab_apply_sampled(IteratedOrder(0.4, 0.0), ONE, sig) is sig
    assert np.array_equal(iab_apply_sampled(IteratedOrder(0.0, -3.0), ONE, sig).values, sig.values)


def test_alignment_check():
    with pytest.raises(AlignmentError):
        iab_apply_fps(IteratedOrder(0.5, 1.0), ONE, FracPowerSeries(0.25, [1.0]))


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("B", [ONE, BUMP])
def test_natural_beta_is_repeated_ab_integral(n, B):
    rng = np.random.default_rng(n)
    f = FracPowerSeries(0.35, rng.uniform(-1, 1, 6))
    direct, composed = iab_iterate_check(IteratedOrder(0.35, n), B, f)
    assert len(direct) == len(composed) == len(f) + n
    assert np.max(np.abs(direct.coeffs - composed.coeffs)) <= 1e-11


def test_iterate_check_examples():
    f = FracPowerSeries(0.5, [1.0])
    d1, c1 = iab_iterate_check(IteratedOrder(0.5, 1), ONE, f)
    assert np.array_equal(c1.coeffs, ab_integral(0.5, ONE, f).coeffs)
    d2, c2 = iab_iterate_check(IteratedOrder(0.5, 2), ONE, f)
    for s in (d2, c2):
        assert abs(eval_fps(s, 1.0) - 1.0641896) <= 1e-7
    d0, c0 = iab_iterate_check(IteratedOrder(0.5, 4), ONE, FracPowerSeries(0.5, [0.0]))
    assert np.all(d0.coeffs == 0) and np.all(c0.coeffs == 0)
    with pytest.raises(DomainError):
        iab_iterate_check(IteratedOrder(0.5, 1.5), ONE, f)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_minus_one_is_abr_closed_form(alpha):
    t = np.linspace(0.0, 1.0, 21)
    out = iab_apply_fps(IteratedOrder(alpha, -1.0), ONE, FracPowerSeries(alpha, [1.0]))
    lam = alpha / (1.0 - alpha)
    want = [mittag_leffler(alpha, -lam * x ** alpha) / (1.0 - alpha) for x in t]
    assert np.max(np.abs(eval_fps(out, t) - want)) <= 1e-9


def test_derivative_fps_agrees_with_negated_order():
    f = FracPowerSeries(0.5, [1.0, 0.2, -0.3])
    order = IteratedOrder(0.5, 1.3)
    a = iab_derivative_fps(order, ONE, f)
    b = iab_apply_fps(-order, ONE, f)
    np.testing.assert_allclose(a.coeffs, b.coeffs, rtol=0, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(-2, 2),
       st.lists(st.floats(-3, 3), min_size=1, max_size=8), st.lists(st.floats(-3, 3), min_size=1, max_size=8),
       st.floats(-2, 2))
def test_iab_linear(alpha, beta, a, b, c):
    order = IteratedOrder(alpha, beta)
    f1, f2 = FracPowerSeries(alpha, a), FracPowerSeries(alpha, b)
    n = 20
    combo = FracPowerSeries(alpha, f1.padded(n) + c * f2.padded(n))
    lhs = iab_apply_fps(order, ONE, combo, n_terms=n).coeffs
    rhs = iab_apply_fps(order, ONE, f1, n_terms=n).coeffs + c * iab_apply_fps(order, ONE, f2, n_terms=n).coeffs
    scale = max(1.0, np.max(np.abs(lhs)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


def test_sampled_matches_ab_integral():
    sig = SampledSignal(0.0, 1.0, np.ones(1001))
    a = iab_apply_sampled(IteratedOrder(0.5, 1.0), ONE, sig)
    b = ab_integral(0.5, ONE, sig)
    assert np.max(np.abs(a.values - b.values)) <= 1e-10


def test_sampled_minus_one_matches_ml():
    sig = SampledSignal(0.0, 1.0, np.ones(2001))
    out = iab_apply_sampled(IteratedOrder(0.5, -1.0), ONE, sig)
    want = abr_of_one(sig.grid)
    assert np.max(np.abs(out.values - want)[2:-2]) <= 1e-3


@pytest.mark.parametrize("alpha, beta", [(0.3, 0.5), (0.5, -1.0), (0.7, 2.0), (0.6, -1.7)])
def test_sampled_agrees_with_series(alpha, beta):
    f = FracPowerSeries(alpha, [1.0, 0.5, -0.25, 0.1])
    order = IteratedOrder(alpha, beta)
    series = eval_fps(iab_apply_fps(order, ONE, f), np.linspace(0.0, 1.0, 2001))
    sampled = iab_apply_sampled(order, ONE, sample_fps(f, 1.0, 2001)).values
    assert np.max(np.abs(series - sampled)) <= 5e-3


def test_extended_and_double_weights_agree_when_benign():
    order = IteratedOrder(0.5, -1.0)
    d = kernel_weights(order, ONE, 257, 1.0 / 256, precision="double")
    e = kernel_weights(order, ONE, 257, 1.0 / 256, precision="extended")
    assert e.extended_precision and not d.extended_precision
    assert np.max(np.abs(d.b - e.b)) <= 1e-12
    assert np.max(np.abs(d.w0 - e.w0)) <= 1e-12


def test_long_interval_uses_extended_precision():
    # the binomial series peaks near 1e27 here; double weights would be noise
    order = IteratedOrder(0.7, -1.0)
    w = kernel_weights(order, ONE, 2001, 0.01)
    assert w.extended_precision and w.cancellation
    sig = SampledSignal(0.0, 20.0, np.ones(2001))
    out = iab_apply_sampled(order, ONE, sig)
    lam = 0.7 / 0.3
    idx = np.arange(40, 2000, 40)
    want = np.array([mittag_leffler(0.7, -lam * x ** 0.7) for x in sig.grid[idx]]) / 0.3
    assert np.max(np.abs(out.values[idx] - want)) <= 2e-3


def test_forced_double_precision_warns():
    sig = SampledSignal(0.0, 20.0, np.ones(201))
    with pytest.warns(CancellationWarning):
        iab_apply_sampled(IteratedOrder(0.7, -1.0), ONE, sig, precision="double")


def test_benign_case_does_not_warn():
    sig = SampledSignal(0.0, 1.0, np.ones(201))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        iab_apply_sampled(IteratedOrder(0.5, -1.0), ONE, sig)


def test_kernel_weights_validation():
    with pytest.raises(DomainError):
        kernel_weights(IteratedOrder(0.5, 1.0), ONE, 11, 0.1, precision="quad")


def test_iab_apply_dispatch():
    order = IteratedOrder(0.5, 1.0)
    f = FracPowerSeries(0.5, [1.0])
    assert isinstance(iab_apply(order, ONE, f), FracPowerSeries)
    assert isinstance(iab_apply(order, ONE, sample_fps(f, 1.0, 11)), SampledSignal)
    with pytest.raises(TypeError):
        iab_apply(order, ONE, [1.0])


def test_identity_weight():
    assert identity_weight(IteratedOrder(0.5, 2.0), ONE) == 0.25
    assert identity_weight(IteratedOrder(0.0, 2.0), ONE) == 1.0
