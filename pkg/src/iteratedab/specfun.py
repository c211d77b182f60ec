r"""Special functions: gamma, generalized binomial coefficients, Mittag-Leffler.

The Mittag-Leffler series

.. math::

    E_\alpha(z) = \sum_{k \ge 0} \frac{z^k}{\Gamma(k\alpha + 1)}

alternates in sign for :math:`z < 0` and its partial sums can be many orders
of magnitude larger than the result.  Terms are therefore formed and
accumulated in double-double arithmetic (an unevaluated sum of two floats,
roughly 32 significant digits).  When the largest term is big enough that
the double-precision gamma values would spoil the result, the sum is done
in ``gmpy2`` multiple precision instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "gamma",
    "gamma_ratio",
    "gen_binomial",
    "mittag_leffler",
    "compensated_sum",
]


@dataclass(frozen=True)
class Tolerance:
    """Truncation control for infinite series.

    A series is cut once a rigorous bound on the absolute value of its
    remaining tail drops below ``abs_tol``; hitting ``max_terms`` first is
    an error.
    """

    abs_tol: float = 1e-15
    max_terms: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")


DEFAULT_TOL = Tolerance()


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises :class:`PoleError` at zero and the negative integers and
    :class:`OverflowError` once the result exceeds the float range.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    return math.gamma(x)


def gamma_ratio(x: float, y: float) -> float:
    """Return ``gamma(x) / gamma(y)`` for positive ``x`` and ``y``.

    Falls back to log-gamma when either factor would overflow.
    """
    if x < 170.0 and y < 170.0:
        return math.gamma(x) / math.gamma(y)
    return math.exp(math.lgamma(x) - math.lgamma(y))


def gen_binomial(beta: float, k: int) -> float:
    r"""Generalized binomial coefficient :math:`\binom{\beta}{k}` for real ``beta``.

    Uses the running product ``prod_{j<k} (beta - j) / (j + 1)`` so that
    negative integer ``beta`` causes no trouble and nonnegative integer
    ``beta`` yields an exact zero for ``k > beta``.
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k!r}")
    out = 1.0
    for j in range(int(k)):
        out *= (beta - j) / (j + 1)
        if out == 0.0:
            break
    return out


# --- double-double helpers -------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    return _fast_two_sum(s, e)


def _dd_mul_d(x, d):
    p, e = _two_prod(x[0], d)
    e += x[1] * d
    return _fast_two_sum(p, e)


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return _fast_two_sum(p, e)


def _dd_div(x, y):
    q1 = x[0] / y[0]
    r = _dd_add(x, _dd_mul_d(y, -q1))
    q2 = r[0] / y[0]
    r = _dd_add(r, _dd_mul_d(y, -q2))
    q3 = r[0] / y[0]
    q1, q2 = _fast_two_sum(q1, q2)
    return _dd_add((q1, q2), (q3, 0.0))


def _int_to_dd(n: int):
    hi = float(n)
    return hi, float(n - int(hi))


def compensated_sum(values) -> float:
    """Sum floats with an error-free accumulator (Shewchuk, via ``math.fsum``)."""
    return math.fsum(values)


def _gamma_dd(x: float):
    """Gamma(x) as a double-double; exact at integers up to 171."""
    if x == math.floor(x) and 1.0 <= x <= 171.0:
        return _int_to_dd(math.factorial(int(x) - 1))
    return math.gamma(x), 0.0


def mittag_leffler(alpha: float, z: float, tol: Tolerance = DEFAULT_TOL) -> float:
    r"""One-parameter Mittag-Leffler function :math:`E_\alpha(z)` by direct series.

    Parameters
    ----------
    alpha : float
        Order in ``(0, 1]``.
    z : float
        Real argument.  Only moderate ``|z|`` is practical; there is no
        asymptotic expansion.
    tol : Tolerance
        The series stops once the geometric majorant of the remaining tail
        is below ``tol.abs_tol``.

    Raises
    ------
    ConvergenceError
        If ``tol.max_terms`` terms do not meet the tail bound.
    """
    alpha = float(alpha)
    z = float(z)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z!r}")
    if z == 0.0:
        return 1.0

    log_abs_z = math.log(abs(z))
    log_peak = _log_peak_term(alpha, log_abs_z, tol.max_terms)
    if z < 0.0 and alpha != 1.0 and log_peak > _EXTENDED_LOG_PEAK:
        return _ml_extended(alpha, z, log_abs_z, log_peak, tol)
    acc = (1.0, 0.0)
    power = (1.0, 0.0)
    for k in range(1, tol.max_terms + 1):
        x = k * alpha + 1.0
        lg = math.lgamma(x)
        mag = math.exp(k * log_abs_z - lg)
        if _tail_below(mag, log_abs_z, lg, x + alpha, tol):
            return acc[0] + acc[1]
        if x > 171.0 or k * log_abs_z > 650.0:
            # factorials or powers leave double range (Dekker split overflows near 1e300)
            return _ml_extended(alpha, z, log_abs_z, log_peak, tol)
        power = _dd_mul_d(power, z)
        acc = _dd_add(acc, _dd_div(power, _gamma_dd(x)))
    raise _no_convergence(alpha, z, tol)


# Above this log-magnitude of the largest term, negative arguments are summed
# in multiple precision: gamma at non-integer points is only good to ~1e-16.
_EXTENDED_LOG_PEAK = math.log(10.0)


def _tail_below(mag, log_abs_z, lg, x_next, tol) -> bool:
    # |t_{k+1} / t_k| is nonincreasing in k (log-convexity of gamma), so once
    # it is below 1 the tail from k onward has a geometric majorant.
    ratio = math.exp(log_abs_z + lg - math.lgamma(x_next))
    return ratio < 1.0 and mag / (1.0 - ratio) < tol.abs_tol


def _log_peak_term(alpha, log_abs_z, max_terms) -> float:
    peak = 0.0
    for k in range(1, max_terms + 1):
        log_mag = k * log_abs_z - math.lgamma(k * alpha + 1.0)
        if log_mag < peak:
            break
        peak = log_mag
    return peak


def _ml_extended(alpha, z, log_abs_z, log_peak, tol) -> float:
    # bits for the cancellation, for a result as small as exp(z), and a margin
    bits = 96 + int((log_peak + max(-z, 0.0)) / math.log(2.0))
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        a = gmpy2.mpfr(alpha)
        zz = gmpy2.mpfr(z)
        acc = gmpy2.mpfr(1)
        power = gmpy2.mpfr(1)
        for k in range(1, tol.max_terms + 1):
            x = k * alpha + 1.0
            lg = math.lgamma(x)
            if _tail_below(math.exp(k * log_abs_z - lg), log_abs_z, lg, x + alpha, tol):
                return float(acc)
            power *= zz
            acc += power / gmpy2.gamma(k * a + 1)
    raise _no_convergence(alpha, z, tol)


def _no_convergence(alpha, z, tol):
    return ConvergenceError(
        f"Mittag-Leffler series for alpha={alpha}, z={z} did not converge in "
        f"{tol.max_terms} terms"
    )
