import math

import numpy as np
import pytest

from iteratedab.analysis import (
    bound_constant_K,
    bound_constant_terms,
    laplace_check,
    laplace_closed_form,
    laplace_numeric,
    power_function,
    semigroup_residual,
    verify_bound,
)
from iteratedab.classical_ops import ONE
from iteratedab.errors import BoundViolation, DomainError
from iteratedab.fps import FracPowerSeries, SampledSignal
from iteratedab.iterated_ab import IteratedOrder


def test_closed_form_examples():
    inv_s = lambda s: 1.0 / s
    assert laplace_closed_form(IteratedOrder(0.5, 1.0), ONE, inv_s, 4.0) == 0.1875
    assert laplace_closed_form(IteratedOrder(0.5, 0.0), ONE, inv_s, 3.0) == 1.0 / 3.0
    assert abs(laplace_closed_form(IteratedOrder(0.5, -1.0), ONE, inv_s, 1.0) - 1.0) <= 1e-15
    with pytest.raises(DomainError):
        laplace_closed_form(IteratedOrder(0.5, 1.0), ONE, inv_s, 0.0)


def test_numeric_examples():
    one = SampledSignal(0.0, 20.0, np.ones(4001))
    assert abs(laplace_numeric(one, 1.0).value - (1.0 - math.exp(-20.0))) <= 1e-8
    ramp = SampledSignal.from_function(lambda t: t, 0.0, 40.0, 4001)
    assert abs(laplace_numeric(ramp, 1.0).value - 1.0) <= 1e-8
    zero = SampledSignal(0.0, 1.0, np.zeros(11))
    assert laplace_numeric(zero, 2.0).value == 0.0
    with pytest.raises(DomainError):
        laplace_numeric(SampledSignal(1.0, 2.0, np.ones(5)), 1.0)


def test_power_function_transform():
    f, fhat = power_function(0.5)
    assert f(4.0) == 2.0
    assert abs(fhat(2.0) - math.gamma(1.5) / 2.0 ** 1.5) <= 1e-15


def test_laplace_check_report():
    report = laplace_check(IteratedOrder(0.5, 1.0), ONE, 1.0, [1.0, 2.0], n_points=4001)
    assert report.T_horizon == 20.0
    assert report.max_rel_error <= 1e-3
    entry = report.entries()[0]
    assert set(entry) == {"input", "expected", "got", "rel_err"}
    assert report.to_dict()["entries"][1]["input"] == 2.0


def test_semigroup_examples():
    f = FracPowerSeries(0.5, [1.0])
    rng = np.random.default_rng(3)
    g = FracPowerSeries(0.4, rng.uniform(-1, 1, 7))
    assert semigroup_residual(0.4, 1.0, -1.0, ONE, g) <= 1e-9
    assert semigroup_residual(0.4, 1.3, 0.0, ONE, g) <= 1e-12
    assert semigroup_residual(0.5, 0.7, 0.9, ONE, f) <= 1e-9


def test_semigroup_relative_scaling():
    f = FracPowerSeries(0.8, [1.0, 2.0, -1.0])
    absolute = semigroup_residual(0.8, 1.9, 1.8, ONE, f, n_terms=40)
    relative = semigroup_residual(0.8, 1.9, 1.8, ONE, f, n_terms=40, relative=True)
    assert relative <= absolute
    assert relative <= 1e-12


def test_bound_constant_examples():
    assert bound_constant_K(IteratedOrder(0.5, 0.0), ONE, 0.0, 1.0) == 1.0
    assert abs(bound_constant_K(IteratedOrder(1e-9, 1.0), ONE, 0.0, 1.0) - 1.0) <= 1e-6
    terms = bound_constant_terms(IteratedOrder(0.5, 1.0), ONE, 0.0, 1.0)
    assert terms.size == 2
    assert abs(terms.sum() - 0.5 * (1.0 + 1.0 / math.gamma(1.5))) <= 1e-15


@pytest.mark.parametrize("n", range(0, 7))
def test_bound_constant_integer_beta_term_count(n):
    assert bound_constant_terms(IteratedOrder(0.3, n), ONE, 0.0, 2.0).size == n + 1


@pytest.mark.parametrize("alpha, beta", [(0.3, 0.5), (0.5, 1.0), (0.7, 2.5), (0.5, 0.0)])
def test_bound_constant_monotone_in_length(alpha, beta):
    order = IteratedOrder(alpha, beta)
    Ks = [bound_constant_K(order, ONE, 0.0, L) for L in np.linspace(0.1, 5.0, 25)]
    assert all(b >= a for a, b in zip(Ks, Ks[1:]))


def test_bound_constant_domain():
    with pytest.raises(DomainError):
        bound_constant_K(IteratedOrder(0.5, 1.0), ONE, 1.0, 1.0)


def test_verify_bound_examples():
    zero = FracPowerSeries(0.5, [0.0])
    report = verify_bound(IteratedOrder(0.5, 1.0), ONE, 0.0, 1.0, [zero])
    assert report.sup_ratios == [0.0] and report.l1_ratios == [0.0]
    one = FracPowerSeries(0.5, [1.0])
    report = verify_bound(IteratedOrder(0.5, 0.0), ONE, 0.0, 1.0, [one])
    assert report.sup_ratios == [1.0] and report.K == 1.0
    root = FracPowerSeries(0.5, [0.0, 1.0])
    report = verify_bound(IteratedOrder(0.5, 1.3), ONE, 0.0, 1.0, [root])
    assert min(report.sup_margins + report.l1_margins) >= 0.0


def test_bound_violation_is_raised(monkeypatch):
    import iteratedab.analysis as analysis

    monkeypatch.setattr(analysis, "bound_constant_K", lambda *a, **k: 0.1)
    with pytest.raises(BoundViolation) as info:
        verify_bound(IteratedOrder(0.5, 1.0), ONE, 0.0, 1.0, [FracPowerSeries(0.5, [1.0])])
    assert info.value.bound == 0.1 and info.value.ratio > 0.1
