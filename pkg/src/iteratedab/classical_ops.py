r"""Riemann-Liouville and Atangana-Baleanu operators.

Two representations are supported.  On a :class:`FracPowerSeries` the
Riemann-Liouville integral is exact by the power rule

.. math::

    I^\mu (t-a)^{l\alpha} = \frac{\Gamma(l\alpha+1)}{\Gamma(l\alpha+\mu+1)} (t-a)^{l\alpha+\mu}.

On a :class:`SampledSignal` it is approximated by the product-trapezoidal
rule: the data are interpolated linearly and the weakly singular kernel is
integrated exactly against each hat function.  The rule is exact for
piecewise-linear data and second order for smooth data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AlignmentError, DomainError
from .fps import MAX_SERIES_LENGTH, FracPowerSeries, SampledSignal, shift_count
from .specfun import DEFAULT_TOL, Tolerance, gamma_ratio, mittag_leffler

__all__ = [
    "Multiplier",
    "ONE",
    "MULTIPLIERS",
    "rl_integral_fps",
    "rl_integral_sampled",
    "ab_integral",
    "abr_derivative_sampled",
    "abc_derivative_sampled",
    "finite_difference",
    "product_trapezoid_weights",
    "apply_product_trapezoid",
]


@dataclass(frozen=True)
class Multiplier:
    """Normalization function ``B(alpha)`` of the AB operators.

    Must satisfy ``B(0) = B(1) = 1`` and be positive; both are checked at
    construction by probing a grid on ``[0, 1]``.
    """

    evaluator: Callable[[float], float]
    name: str = "custom"

    def __post_init__(self):
        for end in (0.0, 1.0):
            value = float(self.evaluator(end))
            if abs(value - 1.0) > 1e-12:
                raise DomainError(f"multiplier {self.name!r} has B({end:g}) = {value!r}, expected 1")
        for alpha in np.linspace(0.0, 1.0, 101):
            value = float(self.evaluator(float(alpha)))
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"multiplier {self.name!r} is not positive at alpha={alpha:g}")

    def __call__(self, alpha: float) -> float:
        return float(self.evaluator(alpha))


ONE = Multiplier(lambda alpha: 1.0, "one")

#: Multipliers selectable by name (used by the command line).
MULTIPLIERS = {"one": ONE}


def _check_open_unit(alpha, what="alpha"):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"{what} must lie in (0, 1), got {alpha!r}")


# --- power series -----------------------------------------------------------

def rl_integral_fps(mu: float, s: FracPowerSeries, max_length: int = MAX_SERIES_LENGTH) -> FracPowerSeries:
    """Riemann-Liouville integral of order ``mu`` applied to a power series.

    ``mu`` must be a nonnegative integer multiple of ``s.alpha`` so the
    result stays in the same class.
    """
    shift = shift_count(mu, s.alpha)
    if shift is None:
        raise AlignmentError(f"order {mu} is not a multiple of the base order {s.alpha}")
    if shift == 0:
        return s
    mu = shift * s.alpha
    lalpha = s.alpha * np.arange(len(s))
    scale = np.array([gamma_ratio(x + 1.0, x + mu + 1.0) for x in lalpha])
    full = np.concatenate([np.zeros(shift), s.coeffs * scale])
    return s.with_coeffs(full[:max_length], truncated=s.truncated or full.size > max_length)


# --- sampled signals ----------------------------------------------------------

def product_trapezoid_weights(mu: float, n_points: int, h: float):
    r"""Product-trapezoid weights for the kernel ``tau**(mu-1) / Gamma(mu)``.

    Returns ``(b, w0)`` such that the integral at node ``n`` is

    .. math::

        \sum_{j=1}^{n} b_{n-j} f_j + w0_n f_0 .

    Works for any ``mu > 0``.  The second differences of ``m**(mu+1)`` are
    formed through ``expm1``/``log1p`` to avoid cancellation at large ``m``.
    """
    if not mu > 0:
        raise DomainError(f"order must be positive, got {mu!r}")
    p = mu + 1.0
    m = np.arange(n_points, dtype=float)
    b = np.empty(n_points)
    w0 = np.zeros(n_points)
    lg = math.lgamma(p + 1.0)
    b[0] = math.exp(mu * math.log(h) - lg)
    if n_points == 1:
        return b, w0
    mm = m[1:]
    # (m h)**p / (h Gamma(p+1)), kept in log form so large p cannot overflow
    scale = np.exp(p * np.log(mm * h) - math.log(h) - lg)
    bracket_b = np.empty_like(mm)
    bracket_w = np.empty_like(mm)
    bracket_b[0] = 2.0 ** p - 2.0
    bracket_w[0] = mu
    if mm.size > 1:
        big = mm[1:]
        up = np.expm1(p * np.log1p(1.0 / big))
        down = np.expm1(p * np.log1p(-1.0 / big))
        bracket_b[1:] = up + down
        bracket_w[1:] = down + p / big
    b[1:] = scale * bracket_b
    w0[1:] = scale * bracket_w
    return b, w0


def apply_product_trapezoid(b: np.ndarray, w0: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Apply precomputed product-trapezoid weights to grid values."""
    n = values.size
    head = values[0]
    rest = np.array(values, dtype=float)
    rest[0] = 0.0
    out = np.convolve(rest, b[:n])[:n] + w0[:n] * head
    out[0] = 0.0
    return out


def rl_integral_sampled(mu: float, sig: SampledSignal) -> SampledSignal:
    """Riemann-Liouville integral of order ``mu`` in ``(0, 1]`` on a uniform grid."""
    if not 0.0 < mu <= 1.0:
        raise DomainError(f"mu must lie in (0, 1], got {mu!r}")
    b, w0 = product_trapezoid_weights(mu, sig.n_points, sig.h)
    return sig.with_values(apply_product_trapezoid(b, w0, sig.values))


def ab_integral(alpha: float, B: Multiplier, f, max_length: int = MAX_SERIES_LENGTH):
    r"""Atangana-Baleanu integral :math:`\frac{1-\alpha}{B}f + \frac{\alpha}{B} I^\alpha f`.

    Accepts either representation and returns the same one.
    """
    _check_open_unit(alpha)
    Ba = B(alpha)
    if isinstance(f, FracPowerSeries):
        rl = rl_integral_fps(alpha, f, max_length)
        n = len(rl)
        coeffs = (1.0 - alpha) / Ba * f.padded(n) + alpha / Ba * rl.coeffs
        return f.with_coeffs(coeffs, truncated=rl.truncated)
    if isinstance(f, SampledSignal):
        rl = rl_integral_sampled(alpha, f)
        return f.with_values((1.0 - alpha) / Ba * f.values + alpha / Ba * rl.values)
    raise TypeError(f"unsupported function representation {type(f).__name__}")


def finite_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative on a uniform grid (one-sided at the ends)."""
    f = np.asarray(values, dtype=float)
    n = f.size
    if n < 5:
        raise DomainError("fourth-order differences need at least 5 points")
    d = np.empty(n)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def _ml_kernel(alpha: float, n_points: int, h: float, tol: Tolerance) -> np.ndarray:
    lam = alpha / (1.0 - alpha)
    return np.array([mittag_leffler(alpha, -lam * (m * h) ** alpha, tol) for m in range(n_points)])


def _trapezoid_convolution(kernel: np.ndarray, values: np.ndarray, h: float) -> np.ndarray:
    """Composite trapezoid for ``int_a^t_n K(t_n - x) f(x) dx`` at every node."""
    n = values.size
    full = np.convolve(values, kernel)[:n]
    out = h * (full - 0.5 * kernel[:n] * values[0] - 0.5 * kernel[0] * values)
    out[0] = 0.0
    return out


def abr_derivative_sampled(alpha: float, B: Multiplier, sig: SampledSignal,
                           tol: Tolerance = DEFAULT_TOL) -> SampledSignal:
    """AB derivative of Riemann-Liouville type: differentiate the kernel integral.

    The Mittag-Leffler-kernel integral is computed by composite trapezoid at
    every node and then differentiated with fourth-order finite differences.
    """
    _check_open_unit(alpha)
    if sig.n_points < 5:
        raise DomainError("need at least 5 grid points")
    kernel = _ml_kernel(alpha, sig.n_points, sig.h, tol)
    g = B(alpha) / (1.0 - alpha) * _trapezoid_convolution(kernel, sig.values, sig.h)
    return sig.with_values(finite_difference(g, sig.h))


def abc_derivative_sampled(alpha: float, B: Multiplier, sig: SampledSignal,
                           tol: Tolerance = DEFAULT_TOL) -> SampledSignal:
    """AB derivative of Caputo type: differentiate first, then integrate."""
    _check_open_unit(alpha)
    if sig.n_points < 5:
        raise DomainError("need at least 5 grid points")
    kernel = _ml_kernel(alpha, sig.n_points, sig.h, tol)
    fprime = finite_difference(sig.values, sig.h)
    return sig.with_values(B(alpha) / (1.0 - alpha) * _trapezoid_convolution(kernel, fprime, sig.h))
