r"""The iterated AB differintegral :math:`\mathcal{I}^{(\alpha,\beta)}_{a+}`.

It is the formal :math:`\beta`-th power of the AB integral, expanded by the
binomial series

.. math::

    \mathcal{I}^{(\alpha,\beta)} f
        = \sum_{k \ge 0} c_k \, I^{k\alpha} f, \qquad
    c_k = \binom{\beta}{k} \frac{(1-\alpha)^{\beta-k} \alpha^k}{B(\alpha)^\beta}.

Positive :math:`\beta` integrates, negative :math:`\beta` differentiates.

On power series the operator is exact coefficient by coefficient: output
coefficient ``m`` only needs ``c_0..c_m``.  On sampled signals the
``k >= 1`` terms are merged into one product-trapezoid kernel.  When the
series for that kernel cancels badly (long intervals, ``alpha`` near 1) the
kernel weights are formed in extended precision with ``gmpy2``.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .classical_ops import (
    Multiplier,
    ab_integral,
    apply_product_trapezoid,
    product_trapezoid_weights,
)
from .errors import AlignmentError, ConvergenceError, DomainError
from .fps import MAX_SERIES_LENGTH, FracPowerSeries, SampledSignal
from .specfun import DEFAULT_TOL, Tolerance, gen_binomial

__all__ = [
    "IteratedOrder",
    "SeriesCoefficients",
    "KernelWeights",
    "CancellationWarning",
    "identity_weight",
    "binomial_weights",
    "derivative_weights",
    "series_coefficients",
    "iab_apply_fps",
    "iab_derivative_fps",
    "iab_apply_sampled",
    "iab_apply",
    "kernel_weights",
    "iab_iterate_check",
]

#: Majorant peak above which sampled kernels switch to extended precision.
EXTENDED_PRECISION_THRESHOLD = 1e4
#: Majorant peak (relative to the leading weight) that counts as cancellation.
CANCELLATION_RATIO = 1e6


class CancellationWarning(RuntimeWarning):
    """Alternating series terms far exceed the size of their sum."""


@dataclass(frozen=True)
class IteratedOrder:
    """Order pair ``(alpha, beta)``; ``alpha`` in ``[0, 1)``, ``beta`` any real."""

    alpha: float
    beta: float

    def __post_init__(self):
        alpha, beta = float(self.alpha), float(self.beta)
        if not 0.0 <= alpha < 1.0:
            raise DomainError(f"alpha must lie in [0, 1), got {alpha!r}")
        if not math.isfinite(beta):
            raise DomainError(f"beta must be finite, got {beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def beta_is_natural(self) -> bool:
        return self.beta >= 0 and self.beta == math.floor(self.beta)

    def __neg__(self):
        return IteratedOrder(self.alpha, -self.beta)


@dataclass(frozen=True)
class SeriesCoefficients:
    """Binomial weights ``c_0..c_K`` with a rigorous bound on the dropped tail.

    ``majorant`` holds the terms ``|c_k| L**(k alpha) / Gamma(k alpha + 1)``
    whose sum bounds the operator norm on an interval of length ``L``.
    """

    c: np.ndarray
    truncation_k: int
    tail_bound: float
    majorant: np.ndarray = field(repr=False)

    @property
    def peak(self) -> float:
        return float(np.max(self.majorant))

    @property
    def cancellation(self) -> bool:
        return self.peak > CANCELLATION_RATIO * max(abs(float(self.c[0])), 1e-300)


def identity_weight(order: IteratedOrder, B: Multiplier) -> float:
    """Weight of the identity term, ``((1 - alpha) / B(alpha)) ** beta``."""
    if order.alpha == 0.0 or order.beta == 0.0:
        return 1.0
    return math.exp(order.beta * (math.log1p(-order.alpha) - math.log(B(order.alpha))))


def binomial_weights(order: IteratedOrder, B: Multiplier, n: int) -> np.ndarray:
    """First ``n`` weights ``c_k`` of the series (no truncation logic)."""
    c = np.zeros(n)
    if n == 0:
        return c
    c[0] = identity_weight(order, B)
    if order.alpha == 0.0:
        return c
    ratio = order.alpha / (1.0 - order.alpha)
    for k in range(1, n):
        c[k] = c[k - 1] * (order.beta - k + 1) / k * ratio
    return c


def derivative_weights(order: IteratedOrder, B: Multiplier, n: int) -> np.ndarray:
    r"""Weights of :math:`\mathcal{D}^{(\alpha,\beta)}` written out directly.

    ``binom(-beta, k) alpha**k B**beta / (1 - alpha)**(beta + k)``; the same
    numbers as ``binomial_weights(-order)``, formed independently.
    """
    alpha, beta = order.alpha, order.beta
    Ba = B(alpha)
    out = np.zeros(n)
    for k in range(n):
        out[k] = gen_binomial(-beta, k) * alpha ** k * Ba ** beta / (1.0 - alpha) ** (beta + k)
    return out


def _log_gamma_ratio(x, y):
    return math.lgamma(x) - math.lgamma(y)


def series_coefficients(order: IteratedOrder, B: Multiplier, interval_length: float,
                        tol: Tolerance = DEFAULT_TOL) -> SeriesCoefficients:
    """Weights ``c_k`` truncated so the norm majorant of the tail is below ``tol.abs_tol``.

    For ``j > beta`` consecutive majorant terms shrink by at most
    ``x * Gamma(j a + 1) / Gamma((j + 1) a + 1) * max(1, (j - beta) / (j + 1))``
    with ``x = alpha L**alpha / (1 - alpha)``; that ratio is nonincreasing in
    ``j``, which gives the geometric tail bound.
    """
    if not interval_length > 0:
        raise DomainError(f"interval_length must be positive, got {interval_length!r}")
    alpha, beta = order.alpha, order.beta
    c0 = identity_weight(order, B)
    if alpha == 0.0 or beta == 0.0:
        return SeriesCoefficients(np.array([c0]), 0, 0.0, np.array([abs(c0)]))

    log_L = math.log(interval_length)
    if order.beta_is_natural:
        n = int(beta)
        c = binomial_weights(order, B, n + 1)
        majorant = np.array([
            abs(c[k]) * math.exp(k * alpha * log_L - math.lgamma(k * alpha + 1.0))
            for k in range(n + 1)
        ])
        return SeriesCoefficients(c, n, 0.0, majorant)

    log_x = math.log(alpha / (1.0 - alpha)) + alpha * log_L
    log_c0 = math.log(abs(c0))
    # log |binom(beta, k)| and its sign, tracked separately to avoid overflow
    log_binom = 0.0
    sign = 1.0
    cs = [c0]
    majorant = [abs(c0)]

    def log_majorant(k, lb):
        return log_c0 + lb + k * log_x - math.lgamma(k * alpha + 1.0)

    k = 0
    while True:
        j = k + 1
        if j > tol.max_terms:
            raise ConvergenceError(
                f"binomial series for alpha={alpha}, beta={beta}, L={interval_length} "
                f"needs more than {tol.max_terms} terms"
            )
        factor = (beta - k) / j
        lb_next = log_binom + math.log(abs(factor))
        if j > beta:
            rho = math.exp(log_x + _log_gamma_ratio(j * alpha + 1.0, (j + 1) * alpha + 1.0))
            rho *= max(1.0, (j - beta) / (j + 1))
            if rho < 1.0:
                tail = math.exp(log_majorant(j, lb_next)) / (1.0 - rho)
                if tail < tol.abs_tol:
                    return SeriesCoefficients(np.array(cs), k, tail, np.array(majorant))
        sign *= math.copysign(1.0, factor)
        log_binom = lb_next
        cs.append(sign * math.exp(log_c0 + log_binom + j * math.log(alpha / (1.0 - alpha))))
        majorant.append(math.exp(log_majorant(j, log_binom)))
        k = j


# --- power series ------------------------------------------------------------

def _gamma_ratio_table(alpha: float, n: int) -> np.ndarray:
    """``R[m, l] = Gamma(l alpha + 1) / Gamma(m alpha + 1)`` for ``l <= m < n``."""
    x = alpha * np.arange(n) + 1.0
    if x[-1] < 170.0:
        g = np.array([math.gamma(v) for v in x])
        return g[None, :] / g[:, None]
    lg = np.array([math.lgamma(v) for v in x])
    return np.exp(lg[None, :] - lg[:, None])


def _apply_weights_fps(weights: np.ndarray, s: FracPowerSeries, n_out: int, truncated: bool):
    alpha = s.alpha
    a = s.padded(n_out)
    R = _gamma_ratio_table(alpha, n_out)
    out = np.empty(n_out)
    for m in range(n_out):
        l = np.arange(m + 1)
        terms = weights[m - l] * a[l] * R[m, l]
        out[m] = math.fsum(terms)
    return s.with_coeffs(out, truncated=truncated)


def _output_length(order, B, s, tol, n_terms, interval_length):
    if n_terms is not None:
        n = int(n_terms)
        if n < 1:
            raise DomainError("n_terms must be positive")
        return n, s.truncated
    if order.beta_is_natural:
        n = len(s) + int(order.beta)
    else:
        coeffs = series_coefficients(order, B, interval_length, tol)
        n = len(s) + coeffs.truncation_k
    if n > MAX_SERIES_LENGTH:
        return MAX_SERIES_LENGTH, True
    return n, s.truncated


def _check_series_alignment(order: IteratedOrder, s: FracPowerSeries):
    if abs(s.alpha - order.alpha) > 1e-12:
        raise AlignmentError(
            f"series base order {s.alpha} differs from operator order alpha={order.alpha}"
        )


def _identity_fps(s: FracPowerSeries, n_terms):
    if n_terms is None or int(n_terms) == len(s):
        return s
    return s.with_coeffs(s.padded(int(n_terms)))


def iab_apply_fps(order: IteratedOrder, B: Multiplier, s: FracPowerSeries,
                  tol: Tolerance = DEFAULT_TOL, n_terms: int | None = None,
                  interval_length: float = 1.0) -> FracPowerSeries:
    r"""Apply :math:`\mathcal{I}^{(\alpha,\beta)}` to a power series in ``(t - a)**alpha``.

    Output coefficient ``m`` is

    .. math::

        \frac{1}{\Gamma(m\alpha+1)} \sum_{k=0}^{m} c_k\, a_{m-k}\, \Gamma((m-k)\alpha+1),

    which is exact (no truncation) for every ``m`` that is returned.

    ``n_terms`` fixes the output length.  By default it is ``len(s)`` plus
    the number of binomial terms needed for ``tol`` on an interval of length
    ``interval_length`` (or plus ``beta`` for natural ``beta``), capped at
    :data:`~iteratedab.fps.MAX_SERIES_LENGTH`.
    """
    if order.alpha == 0.0 or order.beta == 0.0:
        return _identity_fps(s, n_terms)
    _check_series_alignment(order, s)
    n_out, truncated = _output_length(order, B, s, tol, n_terms, interval_length)
    weights = binomial_weights(order, B, n_out)
    return _apply_weights_fps(weights, s, n_out, truncated)


def iab_derivative_fps(order: IteratedOrder, B: Multiplier, s: FracPowerSeries,
                       tol: Tolerance = DEFAULT_TOL, n_terms: int | None = None,
                       interval_length: float = 1.0) -> FracPowerSeries:
    r"""Apply the iterated AB derivative :math:`\mathcal{D}^{(\alpha,\beta)}`.

    Uses the derivative weights written with ``binom(-beta, k)``; it agrees
    with ``iab_apply_fps(-order, ...)`` up to rounding.
    """
    if order.alpha == 0.0 or order.beta == 0.0:
        return _identity_fps(s, n_terms)
    _check_series_alignment(order, s)
    n_out, truncated = _output_length(-order, B, s, tol, n_terms, interval_length)
    weights = derivative_weights(order, B, n_out)
    return _apply_weights_fps(weights, s, n_out, truncated)


# --- sampled signals -----------------------------------------------------------

@dataclass(frozen=True)
class KernelWeights:
    """Product-trapezoid weights of the merged ``k >= 1`` kernel on one grid."""

    identity: float
    b: np.ndarray = field(repr=False)
    w0: np.ndarray = field(repr=False)
    coefficients: SeriesCoefficients = field(repr=False)
    extended_precision: bool = False

    @property
    def cancellation(self) -> bool:
        return self.coefficients.cancellation


def _neumaier(parts):
    """Vectorised compensated sum of equally shaped arrays, in the given order."""
    total = np.zeros_like(parts[0])
    comp = np.zeros_like(parts[0])
    for p in parts:
        t = total + p
        big = np.abs(total) >= np.abs(p)
        comp += np.where(big, (total - t) + p, (p - t) + total)
        total = t
    return total + comp


def _weights_double(alpha, c, n_points, h):
    bs, ws = [], []
    for k in range(1, c.size):
        b, w0 = product_trapezoid_weights(k * alpha, n_points, h)
        bs.append(c[k] * b)
        ws.append(c[k] * w0)
    if not bs:
        return np.zeros(n_points), np.zeros(n_points)
    return _neumaier(bs), _neumaier(ws)


def _weights_extended(order, Ba, K, peak, n_points, h):
    r"""Weights from the kernel antiderivatives ``G`` and ``G'`` in high precision.

    With :math:`G(\tau) = \sum_{k\ge1} c_k \tau^{k\alpha+1}/\Gamma(k\alpha+2)`
    the product-trapezoid weights are second differences of ``G`` divided
    by ``h``; the endpoint weight also needs ``G'``.
    """
    digits = math.log2(max(peak, 2.0))
    prec = int(digits + 4 * math.log2(n_points + 2) + 96)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        mpf = gmpy2.mpfr
        alpha, beta = mpf(order.alpha), mpf(order.beta)
        one = mpf(1)
        ratio = alpha / (one - alpha)
        c = (one - alpha) / mpf(Ba)
        c = gmpy2.exp(beta * gmpy2.log(c))
        d_G, d_Gp = [], []
        for k in range(1, K + 1):
            c = c * (beta - (k - 1)) / k * ratio
            ka = k * alpha
            d_Gp.append(c / gmpy2.gamma(ka + 1))
            d_G.append(c / gmpy2.gamma(ka + 2))
        hh = mpf(h)
        u = np.empty(n_points + 1, dtype=object)
        tau = np.empty(n_points + 1, dtype=object)
        for m in range(n_points + 1):
            tau[m] = m * hh
            u[m] = tau[m] ** alpha if m else mpf(0)
        acc_G = np.full(n_points + 1, d_G[-1], dtype=object)
        acc_Gp = np.full(n_points + 1, d_Gp[-1], dtype=object)
        for k in range(K - 2, -1, -1):
            acc_G = acc_G * u + d_G[k]
            acc_Gp = acc_Gp * u + d_Gp[k]
        G = acc_G * u * tau
        Gp = acc_Gp * u
        b = np.empty(n_points)
        w0 = np.zeros(n_points)
        b[0] = float(G[1] / hh)
        for m in range(1, n_points):
            b[m] = float((G[m + 1] - 2 * G[m] + G[m - 1]) / hh)
            w0[m] = float(Gp[m] - (G[m] - G[m - 1]) / hh)
    return b, w0


@functools.lru_cache(maxsize=64)
def _cached_kernel_weights(order, B, n_points, h, tol, precision):
    coeffs = series_coefficients(order, B, h * (n_points - 1), tol)
    K = coeffs.truncation_k
    extended = False
    if K == 0:
        b, w0 = np.zeros(n_points), np.zeros(n_points)
    elif precision == "extended" or (
        precision == "auto" and coeffs.peak > EXTENDED_PRECISION_THRESHOLD
    ):
        b, w0 = _weights_extended(order, B(order.alpha), K, coeffs.peak, n_points, h)
        extended = True
    else:
        b, w0 = _weights_double(order.alpha, coeffs.c, n_points, h)
    for arr in (b, w0):
        arr.setflags(write=False)
    return KernelWeights(float(coeffs.c[0]), b, w0, coeffs, extended)


def kernel_weights(order: IteratedOrder, B: Multiplier, n_points: int, h: float,
                   tol: Tolerance = DEFAULT_TOL, precision: str = "auto") -> KernelWeights:
    """Merged product-trapezoid weights for the iterated operator on a uniform grid.

    ``precision`` is ``"auto"`` (extended precision only when the series
    majorant peaks above :data:`EXTENDED_PRECISION_THRESHOLD`), ``"double"``
    or ``"extended"``.  Results are cached per grid and order.
    """
    if precision not in ("auto", "double", "extended"):
        raise DomainError(f"unknown precision mode {precision!r}")
    if not 0.0 < order.alpha < 1.0:
        raise DomainError(f"sampled operator needs alpha in (0, 1), got {order.alpha!r}")
    return _cached_kernel_weights(order, B, int(n_points), float(h), tol, precision)


def iab_apply_sampled(order: IteratedOrder, B: Multiplier, sig: SampledSignal,
                      tol: Tolerance = DEFAULT_TOL, precision: str = "auto") -> SampledSignal:
    r"""Apply :math:`\mathcal{I}^{(\alpha,\beta)}` to grid data.

    Evaluates the identity term plus the kernel sum
    ``sum_k c_k I^{k alpha} f`` with the binomial series truncated for
    the interval ``[a, b]``.  ``beta == 0`` returns the input unchanged.
    """
    if order.beta == 0.0 or order.alpha == 0.0:
        return sig
    w = kernel_weights(order, B, sig.n_points, sig.h, tol, precision)
    if w.cancellation and not w.extended_precision:
        warnings.warn(
            f"binomial series for alpha={order.alpha}, beta={order.beta} on an interval "
            f"of length {sig.b - sig.a} has terms up to {w.coefficients.peak:.3g}; "
            "double precision results may be inaccurate",
            CancellationWarning,
            stacklevel=2,
        )
    values = w.identity * sig.values + apply_product_trapezoid(w.b, w.w0, sig.values)
    return sig.with_values(values)


def iab_apply(order: IteratedOrder, B: Multiplier, f, tol: Tolerance = DEFAULT_TOL, **kwargs):
    """Dispatch on the representation of ``f``."""
    if isinstance(f, FracPowerSeries):
        return iab_apply_fps(order, B, f, tol, **kwargs)
    if isinstance(f, SampledSignal):
        return iab_apply_sampled(order, B, f, tol, **kwargs)
    raise TypeError(f"unsupported function representation {type(f).__name__}")


def iab_iterate_check(order: IteratedOrder, B: Multiplier, f: FracPowerSeries):
    """Return ``(iterated operator with beta = n, n-fold AB integral)`` of ``f``.

    Both results have ``len(f) + n`` coefficients and should coincide.
    """
    n = order.beta
    if not (order.beta_is_natural and 1 <= n <= 8):
        raise DomainError(f"beta must be an integer in 1..8, got {n!r}")
    n = int(n)
    direct = iab_apply_fps(order, B, f, n_terms=len(f) + n)
    composed = f
    for _ in range(n):
        composed = ab_integral(order.alpha, B, composed)
    return direct, composed
