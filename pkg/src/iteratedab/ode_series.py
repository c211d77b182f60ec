r"""Series solutions of two differintegral equations in the ansatz class.

Both equations are solved with :math:`f(t) = \sum_n a_n t^{n\alpha}`:

* the quadratic equation :math:`\mathcal{I}^{(\alpha,\beta)} f = P + Q f + R f^2`;
* the relaxation equation :math:`\mathcal{D}^{(\alpha,\beta)} f = -C f + q`,
  where :math:`\mathcal{D}^{(\alpha,\beta)} = \mathcal{I}^{(\alpha,-\beta)}`
  and the forcing ``q`` is itself a series in :math:`t^{\alpha}`.

Coefficients come from explicit recurrences.  Residuals are computed by a
separate route (apply the operator to the candidate series and subtract
the right-hand side), so a solver bug cannot hide behind its own algebra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .classical_ops import Multiplier
from .errors import (
    DiscriminantError,
    DomainError,
    LinearDegenerateError,
    ResonanceError,
    SingularDenominatorError,
)
from .fps import FracPowerSeries, multiply_fps
from .iterated_ab import IteratedOrder, binomial_weights, iab_apply_fps, identity_weight
from .specfun import gamma_ratio

__all__ = [
    "QuadraticODEParams",
    "RelaxationODEParams",
    "SeriesSolution",
    "solve_quadratic",
    "solve_linear",
    "solve_relaxation",
    "residual_check",
    "quadratic_roots",
]

DEFAULT_ORDER = 40
SOLVER_TOL = 1e-10


@dataclass(frozen=True)
class QuadraticODEParams:
    """``I f = P + Q f + R f**2``; ``branch`` picks the root for ``a_0``.

    ``branch=None`` selects the root with the smaller ``|a_0|``.
    """

    P: float
    Q: float
    R: float
    branch: str | None = None
    M: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.branch not in (None, "+", "-"):
            raise DomainError(f"branch must be '+', '-' or None, got {self.branch!r}")
        if self.M < 0:
            raise DomainError("truncation order must be nonnegative")


@dataclass(frozen=True)
class RelaxationODEParams:
    """``D f = -C f + q`` with forcing ``q`` given as a series."""

    C: float
    forcing: FracPowerSeries
    M: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.M < 0:
            raise DomainError("truncation order must be nonnegative")


@dataclass
class SeriesSolution:
    solution: FracPowerSeries
    residual_coeffs: np.ndarray
    branch_used: str | None
    order: IteratedOrder
    diagnostics: dict = field(default_factory=dict)

    @property
    def residual_max(self) -> float:
        return float(np.max(np.abs(self.residual_coeffs)))

    @property
    def coeffs(self) -> np.ndarray:
        return self.solution.coeffs

    def to_dict(self) -> dict:
        return {
            "alpha": self.order.alpha,
            "beta": self.order.beta,
            "coeffs": [float(c) for c in self.solution.coeffs],
            "residual_max": self.residual_max,
            "branch": self.branch_used,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_alpha(order: IteratedOrder):
    if not 0.0 < order.alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {order.alpha!r}")


def _gamma_ratios(alpha: float, m: int) -> np.ndarray:
    """``Gamma(l alpha + 1) / Gamma(m alpha + 1)`` for ``l = 0..m``."""
    x = m * alpha + 1.0
    return np.array([gamma_ratio(l * alpha + 1.0, x) for l in range(m + 1)])


def _memory_sum(a: np.ndarray, weights: np.ndarray, alpha: float, m: int) -> float:
    """``sum_{k=1}^m a_{m-k} w_k Gamma((m-k) alpha + 1) / Gamma(m alpha + 1)``."""
    ratios = _gamma_ratios(alpha, m)
    k = np.arange(1, m + 1)
    return math.fsum(a[m - k] * weights[k] * ratios[m - k])


def _decay_ratio(a: np.ndarray) -> float | None:
    if a.size < 2 or a[-2] == 0.0:
        return None
    return abs(a[-1] / a[-2])


def quadratic_roots(lam: float, P: float, Q: float, R: float):
    """Roots ``(plus, minus)`` of ``R a**2 + (Q - lam) a + P = 0``.

    ``plus`` is ``(lam - Q + sqrt(disc)) / (2R)``.  Both are formed without
    subtractive cancellation.
    """
    if R == 0.0:
        raise LinearDegenerateError("R = 0: the equation is linear, use solve_linear")
    p = lam - Q
    disc = p * p - 4.0 * P * R
    if disc < 0.0:
        raise DiscriminantError(
            f"discriminant (lambda - Q)^2 - 4PR = {disc!r} < 0: no real leading coefficient"
        )
    root = math.sqrt(disc)
    q = 0.5 * (p + math.copysign(root, p))
    big = q / R
    small = P / q if q != 0.0 else 0.0
    if p >= 0.0:
        return big, small
    return small, big


def solve_quadratic(order: IteratedOrder, B: Multiplier, params: QuadraticODEParams) -> SeriesSolution:
    """Series solution of ``I(alpha, beta) f = P + Q f + R f**2``.

    ``a_0`` solves ``lam a_0 = P + Q a_0 + R a_0**2`` with
    ``lam = ((1 - alpha) / B) ** beta``; each later coefficient is linear in
    itself with denominator ``lam - Q - 2 R a_0``.
    """
    _check_alpha(order)
    P, Q, R = params.P, params.Q, params.R
    if R == 0.0:
        raise LinearDegenerateError("R = 0: the equation is linear, use solve_linear")
    lam = identity_weight(order, B)
    plus, minus = quadratic_roots(lam, P, Q, R)
    branch = params.branch
    if branch is None:
        branch = "+" if abs(plus) < abs(minus) else "-"
    a0 = plus if branch == "+" else minus
    den = lam - Q - 2.0 * R * a0
    if abs(den) <= 1e-14:
        raise ResonanceError(f"lam - Q - 2 R a_0 = {den!r} vanishes; the recurrence is singular")

    M = params.M
    c = binomial_weights(order, B, M + 1)
    a = np.zeros(M + 1)
    a[0] = a0
    for m in range(1, M + 1):
        quad = math.fsum(a[1:m] * a[m - 1:0:-1]) if m > 1 else 0.0
        a[m] = (R * quad - _memory_sum(a, c, order.alpha, m)) / den
    sol = FracPowerSeries(order.alpha, a)
    residual = residual_check(order, B, sol, params)
    diagnostics = {"lambda": lam, "denominator": den, "decay_ratio": _decay_ratio(a)}
    return SeriesSolution(sol, residual, branch, order, diagnostics)


def solve_linear(order: IteratedOrder, B: Multiplier, params: QuadraticODEParams) -> SeriesSolution:
    """The ``R = 0`` case: ``I(alpha, beta) f = P + Q f``.

    ``a_0 = P / (lam - Q)`` and every later coefficient follows from the
    memory terms alone.
    """
    _check_alpha(order)
    if params.R != 0.0:
        raise DomainError("solve_linear needs R = 0")
    lam = identity_weight(order, B)
    den = lam - params.Q
    if abs(den) <= 1e-14:
        raise ResonanceError(f"lam - Q = {den!r} vanishes")
    M = params.M
    c = binomial_weights(order, B, M + 1)
    a = np.zeros(M + 1)
    a[0] = params.P / den
    for m in range(1, M + 1):
        a[m] = -_memory_sum(a, c, order.alpha, m) / den
    sol = FracPowerSeries(order.alpha, a)
    residual = residual_check(order, B, sol, params)
    diagnostics = {"lambda": lam, "denominator": den, "decay_ratio": _decay_ratio(a)}
    return SeriesSolution(sol, residual, None, order, diagnostics)


def solve_relaxation(order: IteratedOrder, B: Multiplier, params: RelaxationODEParams) -> SeriesSolution:
    """Series solution of ``D(alpha, beta) f = -C f + q`` for ``beta > 0``.

    The derivative operator has identity weight ``(B / (1 - alpha)) ** beta``;
    with ``den = C + (B / (1 - alpha)) ** beta`` the recurrence is
    ``a_m = (q_m - memory_m) / den``.
    """
    _check_alpha(order)
    if not order.beta > 0:
        raise DomainError(f"relaxation equation needs beta > 0, got {order.beta!r}")
    q = params.forcing
    if abs(q.alpha - order.alpha) > 1e-12:
        raise DomainError("forcing series must use the operator's alpha as base order")
    deriv = -order
    d = binomial_weights(deriv, B, params.M + 1)
    den = float(params.C + d[0])
    if abs(den) <= 1e-14 * max(1.0, abs(d[0])):
        raise SingularDenominatorError(
            f"C + (B/(1-alpha))^beta = {den!r} vanishes; no series solution"
        )
    M = params.M
    qc = q.padded(M + 1)
    a = np.zeros(M + 1)
    a[0] = qc[0] / den
    for m in range(1, M + 1):
        a[m] = (qc[m] - _memory_sum(a, d, order.alpha, m)) / den
    sol = FracPowerSeries(order.alpha, a, q.origin)
    residual = residual_check(order, B, sol, params)
    diagnostics = {"denominator": den, "decay_ratio": _decay_ratio(a)}
    return SeriesSolution(sol, residual, None, order, diagnostics)


def residual_check(order: IteratedOrder, B: Multiplier, candidate: FracPowerSeries, equation) -> np.ndarray:
    """Coefficients ``0..M`` of left minus right side for a candidate series.

    Goes through :func:`iab_apply_fps` and :func:`multiply_fps` only.
    """
    M = equation.M
    n = M + 1
    if isinstance(equation, QuadraticODEParams):
        lhs = iab_apply_fps(order, B, candidate, n_terms=n).padded(n)
        rhs = equation.Q * candidate.padded(n)
        rhs[0] += equation.P
        if equation.R != 0.0:
            rhs += equation.R * multiply_fps(candidate, candidate).padded(n)
        return lhs - rhs
    if isinstance(equation, RelaxationODEParams):
        lhs = iab_apply_fps(-order, B, candidate, n_terms=n).padded(n)
        lhs += equation.C * candidate.padded(n)
        return lhs - equation.forcing.padded(n)
    raise TypeError(f"unknown equation type {type(equation).__name__}")
