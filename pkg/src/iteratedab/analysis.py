"""Numerical checks of the operator's Laplace transform, semigroup law and norm bound."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import simpson

from .classical_ops import Multiplier
from .errors import BoundViolation, ConvergenceError, DomainError
from .fps import FracPowerSeries, SampledSignal, norm_inf, norm_l1, sample_fps
from .iterated_ab import IteratedOrder, iab_apply_fps, iab_apply_sampled
from .specfun import DEFAULT_TOL, Tolerance, gen_binomial

__all__ = [
    "LaplaceEstimate",
    "LaplaceCheckReport",
    "BoundReport",
    "laplace_closed_form",
    "laplace_numeric",
    "laplace_check",
    "power_function",
    "semigroup_residual",
    "bound_constant_terms",
    "bound_constant_K",
    "verify_bound",
]


def laplace_closed_form(order: IteratedOrder, B: Multiplier, fhat: Callable[[float], float], s: float) -> float:
    """Laplace transform of the iterated operator applied to ``f``, given ``fhat``."""
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    alpha, beta = order.alpha, order.beta
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    Ba = B(alpha)
    symbol = (1.0 - alpha) / Ba + alpha / Ba * s ** (-alpha)
    return symbol ** beta * fhat(s)


class LaplaceEstimate(NamedTuple):
    value: float
    tail: float


def laplace_numeric(sig: SampledSignal, s: float) -> LaplaceEstimate:
    """Composite Simpson estimate of ``int_0^b exp(-s t) f(t) dt``.

    ``tail`` is the crude estimate ``|f(b)| exp(-s b) / s`` of the part of
    the integral beyond the grid; it is reported, not added.
    """
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    if sig.a != 0.0:
        raise DomainError("Laplace transforms are taken over grids starting at 0")
    t = sig.grid
    value = float(simpson(np.exp(-s * t) * sig.values, x=t))
    tail = abs(float(sig.values[-1])) * math.exp(-s * sig.b) / s
    return LaplaceEstimate(value, tail)


def power_function(p: float):
    """``(f, fhat)`` for ``f(t) = t**p`` with ``p >= 0``."""
    if p < 0:
        raise DomainError("power must be nonnegative")
    if p == 0:
        return (lambda t: np.ones_like(np.asarray(t, dtype=float))), (lambda s: 1.0 / s)
    return (lambda t: np.asarray(t, dtype=float) ** p), (lambda s: math.gamma(p + 1.0) / s ** (p + 1.0))


@dataclass
class LaplaceCheckReport:
    """Closed-form versus numerical Laplace transforms at several ``s``."""

    s_values: list
    closed_form: list
    numeric: list
    rel_errors: list
    T_horizon: float
    tails: list = field(default_factory=list)
    label: str = ""

    @property
    def max_rel_error(self) -> float:
        return max(self.rel_errors) if self.rel_errors else 0.0

    def entries(self) -> list:
        return [
            {"input": s, "expected": e, "got": g, "rel_err": r}
            for s, e, g, r in zip(self.s_values, self.closed_form, self.numeric, self.rel_errors)
        ]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["entries"] = self.entries()
        return out


def laplace_check(order: IteratedOrder, B: Multiplier, power: float, s_values: Sequence[float],
                  horizon: float | None = None, n_points: int = 16001,
                  tol: Tolerance = DEFAULT_TOL) -> LaplaceCheckReport:
    """Compare the numerical transform of the sampled operator with the closed form.

    ``f(t) = t**power`` is sampled on ``[0, T]`` with ``T = 20 / min(s)`` by
    default, the iterated operator is applied on the grid and the result is
    transformed with Simpson's rule.
    """
    s_values = [float(s) for s in s_values]
    if horizon is None:
        horizon = 20.0 / min(s_values)
    if n_points % 2 == 0:
        n_points += 1
    f, fhat = power_function(power)
    sig = SampledSignal.from_function(f, 0.0, horizon, n_points)
    g = iab_apply_sampled(order, B, sig, tol)
    closed, numeric, rel, tails = [], [], [], []
    for s in s_values:
        exact = laplace_closed_form(order, B, fhat, s)
        est = laplace_numeric(g, s)
        closed.append(exact)
        numeric.append(est.value)
        tails.append(est.tail)
        rel.append(abs(est.value - exact) / abs(exact))
    label = f"alpha={order.alpha:g} beta={order.beta:g} f=t^{power:g}"
    return LaplaceCheckReport(s_values, closed, numeric, rel, horizon, tails, label)


def semigroup_residual(alpha: float, beta: float, gamma: float, B: Multiplier, f: FracPowerSeries,
                       tol: Tolerance = DEFAULT_TOL, n_terms: int | None = None,
                       relative: bool = False) -> float:
    """Largest coefficient gap between composed and direct application.

    Compares ``I(alpha, beta) I(alpha, gamma) f`` with ``I(alpha, beta + gamma) f``
    over ``n_terms`` coefficients (default: the direct result's length).
    With ``relative=True`` the gap is divided by ``max(1, max |coeff|)``.
    """
    direct = iab_apply_fps(IteratedOrder(alpha, beta + gamma), B, f, tol, n_terms=n_terms)
    n = len(direct)
    inner = iab_apply_fps(IteratedOrder(alpha, gamma), B, f, tol, n_terms=n)
    outer = iab_apply_fps(IteratedOrder(alpha, beta), B, inner, tol, n_terms=n)
    diff = np.abs(outer.padded(n) - direct.padded(n))
    gap = float(diff.max())
    if relative:
        gap /= max(1.0, float(np.abs(direct.padded(n)).max()))
    return gap


def bound_constant_terms(order: IteratedOrder, B: Multiplier, a: float, b: float,
                         tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Terms ``((1-a)/B)**beta |binom(beta, k)| x**k / Gamma(k alpha + 1)`` of the bound constant.

    ``x = alpha (b - a)**alpha / (1 - alpha)``.  For natural ``beta`` there
    are exactly ``beta + 1`` terms; otherwise terms are added until a
    geometric bound on the rest drops below ``tol.abs_tol``.
    """
    if not b > a:
        raise DomainError(f"need b > a, got a={a!r}, b={b!r}")
    alpha, beta = order.alpha, order.beta
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    lam = ((1.0 - alpha) / B(alpha)) ** beta
    if beta == 0.0:
        return np.array([lam])
    x = alpha * (b - a) ** alpha / (1.0 - alpha)
    if order.beta_is_natural:
        n = int(beta)
        return np.array([
            lam * abs(gen_binomial(beta, k)) * x ** k / math.gamma(k * alpha + 1.0)
            for k in range(n + 1)
        ])
    terms = [lam]
    binom = 1.0
    for k in range(1, tol.max_terms + 1):
        binom *= (beta - k + 1) / k
        term = lam * abs(binom) * math.exp(k * math.log(x) - math.lgamma(k * alpha + 1.0))
        terms.append(term)
        j = k + 1
        if j > beta:
            ratio = x * math.exp(math.lgamma(j * alpha + 1.0) - math.lgamma((j + 1) * alpha + 1.0))
            ratio *= max(1.0, (j - beta) / (j + 1))
            nxt = term * abs(beta - k) / j * x * math.exp(
                math.lgamma(k * alpha + 1.0) - math.lgamma(j * alpha + 1.0))
            if ratio < 1.0 and nxt / (1.0 - ratio) < tol.abs_tol:
                return np.array(terms)
    raise ConvergenceError(f"bound constant series did not converge in {tol.max_terms} terms")


def bound_constant_K(order: IteratedOrder, B: Multiplier, a: float, b: float,
                     tol: Tolerance = DEFAULT_TOL) -> float:
    """Norm bound shared by the sup and L1 estimates on ``[a, b]``."""
    return math.fsum(bound_constant_terms(order, B, a, b, tol))


@dataclass
class BoundReport:
    K: float
    sup_ratios: list
    l1_ratios: list

    @property
    def sup_margins(self):
        return [self.K - r for r in self.sup_ratios]

    @property
    def l1_margins(self):
        return [self.K - r for r in self.l1_ratios]

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "sup_ratios": self.sup_ratios,
            "l1_ratios": self.l1_ratios,
            "sup_margins": self.sup_margins,
            "l1_margins": self.l1_margins,
        }


def verify_bound(order: IteratedOrder, B: Multiplier, a: float, b: float,
                 test_functions: Sequence[FracPowerSeries], n_points: int = 1001,
                 tol: Tolerance = DEFAULT_TOL, slack: float = 1e-6) -> BoundReport:
    """Check ``||I f|| <= K ||f||`` in grid sup and trapezoid L1 norms.

    Each test function is sampled on ``[a, b]`` (its origin must be ``a``).
    Raises :class:`BoundViolation` if a ratio exceeds ``K (1 + slack)``.
    """
    K = bound_constant_K(order, B, a, b, tol)
    sup_ratios, l1_ratios = [], []
    for f in test_functions:
        if f.origin != a:
            raise DomainError("test function origin must equal the left endpoint")
        sig = sample_fps(f, b, n_points)
        g = iab_apply_sampled(order, B, sig, tol)
        ratios = []
        for norm in (norm_inf, norm_l1):
            nf = norm(sig)
            ratios.append(0.0 if nf == 0.0 else norm(g) / nf)
        for name, r in zip(("sup", "L1"), ratios):
            if r > K * (1.0 + slack):
                raise BoundViolation(
                    f"{name} ratio {r!r} exceeds bound {K!r}", function=f, ratio=r, bound=K,
                )
        sup_ratios.append(ratios[0])
        l1_ratios.append(ratios[1])
    return BoundReport(K, sup_ratios, l1_ratios)
