import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iteratedab.errors import DomainError, MismatchError
from iteratedab.fps import (
    FracPowerSeries,
    SampledSignal,
    add_fps,
    eval_fps,
    multiply_fps,
    norm_inf,
    norm_l1,
    sample_fps,
    scale_fps,
    shift_count,
)

coeff_lists = st.lists(st.floats(-10, 10), min_size=1, max_size=12)


def fps(coeffs, alpha=0.5, origin=0.0):
    return FracPowerSeries(alpha, coeffs, origin)


@pytest.mark.parametrize("coeffs, t, want", [([1], 7.0, 1.0), ([0, 1], 4.0, 2.0), ([1, 2, 3], 1.0, 6.0)])
def test_eval_examples(coeffs, t, want):
    assert eval_fps(fps(coeffs), t) == want


def test_eval_vectorized_and_origin():
    s = fps([1.0, 2.0], alpha=0.5, origin=1.0)
    np.testing.assert_allclose(s(np.array([1.0, 2.0, 5.0])), [1.0, 3.0, 5.0])
    with pytest.raises(DomainError):
        s(0.5)


def test_series_is_immutable():
    s = fps([1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 3.0


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
def test_base_order_range(alpha):
    with pytest.raises(DomainError):
        FracPowerSeries(alpha, [1.0])


def test_rejects_empty_and_nonfinite():
    with pytest.raises(DomainError):
        fps([])
    with pytest.raises(DomainError):
        fps([1.0, np.nan])


def test_multiply_examples():
    assert list(multiply_fps(fps([1, 1]), fps([1, 1])).coeffs) == [1, 2, 1]
    s = fps([0.3, -2.0, 5.0])
    assert np.array_equal(multiply_fps(s, fps([1.0])).coeffs, s.coeffs)
    assert list(multiply_fps(fps([0, 1]), fps([0, 1])).coeffs) == [0, 0, 1]


def test_multiply_mismatch():
    with pytest.raises(MismatchError):
        multiply_fps(fps([1.0], alpha=0.5), fps([1.0], alpha=0.25))
    with pytest.raises(MismatchError):
        multiply_fps(fps([1.0], origin=0.0), fps([1.0], origin=1.0))


def test_multiply_truncation_is_flagged():
    out = multiply_fps(fps(np.ones(10)), fps(np.ones(10)), max_length=8)
    assert len(out) == 8 and out.truncated
    assert not multiply_fps(fps([1, 1]), fps([1, 1])).truncated


@settings(max_examples=200, deadline=None)
@given(coeff_lists, coeff_lists)
def test_multiply_commutative(a, b):
    np.testing.assert_allclose(multiply_fps(fps(a), fps(b)).coeffs,
                               multiply_fps(fps(b), fps(a)).coeffs, rtol=0, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_multiply_associative(a, b, c):
    left = multiply_fps(multiply_fps(fps(a), fps(b)), fps(c)).coeffs
    right = multiply_fps(fps(a), multiply_fps(fps(b), fps(c))).coeffs
    scale = max(1.0, np.max(np.abs(left)))
    np.testing.assert_allclose(left, right, rtol=0, atol=1e-12 * scale)


@settings(max_examples=200, deadline=None)
@given(coeff_lists, coeff_lists, st.floats(0.0, 1.0))
def test_multiply_is_pointwise_product(a, b, t):
    s1, s2 = fps(a), fps(b)
    prod = eval_fps(multiply_fps(s1, s2), t)
    want = eval_fps(s1, t) * eval_fps(s2, t)
    scale = max(1.0, np.sum(np.abs(a)) * np.sum(np.abs(b)))
    assert abs(prod - want) <= 1e-10 * scale


def test_add_and_scale():
    s = add_fps(fps([1.0, 2.0]), fps([0.5]))
    assert list(s.coeffs) == [1.5, 2.0]
    assert list(scale_fps(s, 2.0).coeffs) == [3.0, 4.0]


def test_sample_examples():
    assert list(sample_fps(fps([1.0]), 1.0, 5).values) == [1.0] * 5
    np.testing.assert_allclose(sample_fps(fps([0, 1]), 1.0, 3).values, [0.0, 0.7071068, 1.0], atol=1e-7)
    assert list(sample_fps(fps([2.0]), 2.0, 2).values) == [2.0, 2.0]


def test_sample_domain():
    with pytest.raises(DomainError):
        sample_fps(fps([1.0]), 0.0, 5)
    with pytest.raises(DomainError):
        sample_fps(fps([1.0]), 1.0, 1)


def test_shift_count():
    assert shift_count(1.0, 0.5) == 2
    assert shift_count(0.0, 0.3) == 0
    assert shift_count(0.9, 0.3) == 3
    assert shift_count(0.7, 0.5) is None


def test_json_round_trip():
    s = fps([0.1, -2.5, 1e-300], alpha=0.3, origin=0.25)
    back = FracPowerSeries.from_json(s.to_json())
    assert back.alpha == s.alpha and back.origin == s.origin
    assert np.array_equal(back.coeffs, s.coeffs)
    assert set(json.loads(s.to_json())) == {"alpha", "origin", "coeffs"}


def test_sampled_signal_grid():
    sig = SampledSignal(0.0, 2.0, np.arange(5.0))
    assert sig.n_points == 5 and sig.h == 0.5
    np.testing.assert_array_equal(sig.grid, [0.0, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(DomainError):
        SampledSignal(1.0, 1.0, [1.0, 2.0])
    with pytest.raises(DomainError):
        SampledSignal(0.0, 1.0, [1.0])


def test_csv_round_trip():
    sig = SampledSignal.from_function(np.sin, 0.0, 1.0, 11)
    text = sig.to_csv()
    assert text.splitlines()[0] == "t,value"
    back = SampledSignal.from_csv(text)
    assert np.array_equal(back.values, sig.values)
    assert back.a == 0.0 and back.b == 1.0


def test_csv_rejects_nonuniform_grid():
    with pytest.raises(DomainError):
        SampledSignal.from_csv("t,value\n0,1\n0.1,1\n1,1\n")


def test_norms():
    sig = SampledSignal(0.0, 1.0, [1.0, -3.0, 1.0])
    assert norm_inf(sig) == 3.0
    assert norm_l1(sig) == 0.5 * (0.5 + 3.0 + 0.5)
