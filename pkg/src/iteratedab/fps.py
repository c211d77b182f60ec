r"""Function representations: fractional power series and sampled signals.

A :class:`FracPowerSeries` stores :math:`f(t) = \sum_n a_n (t-a)^{n\alpha}`
with one fixed exponent step :math:`\alpha`.  Every operator in this package
maps that class into itself, which is what makes exact coefficient-level
checks possible.  A :class:`SampledSignal` is the quadrature-side
counterpart: values on a uniform grid.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MismatchError

__all__ = [
    "MAX_SERIES_LENGTH",
    "FracPowerSeries",
    "SampledSignal",
    "eval_fps",
    "multiply_fps",
    "add_fps",
    "scale_fps",
    "sample_fps",
    "shift_count",
    "norm_inf",
    "norm_l1",
]

#: Cap on coefficient list length produced by products and operators.
MAX_SERIES_LENGTH = 256


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FracPowerSeries:
    """Coefficients ``a_0..a_M`` of a series in powers of ``(t - origin)**alpha``.

    ``truncated`` records that some operation dropped coefficients beyond
    :data:`MAX_SERIES_LENGTH` (or a caller-supplied length).
    """

    alpha: float
    coeffs: np.ndarray
    origin: float = 0.0
    truncated: bool = False

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"base order must lie in (0, 1), got {alpha!r}")
        coeffs = _frozen_array(self.coeffs)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("coeffs must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coeffs must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return self.coeffs.size

    def __call__(self, t):
        return eval_fps(self, t)

    @classmethod
    def constant(cls, value, alpha, origin=0.0):
        return cls(alpha, [value], origin)

    def with_coeffs(self, coeffs, truncated=None):
        """Same base order and origin, new coefficients."""
        return FracPowerSeries(
            self.alpha, coeffs, self.origin,
            self.truncated if truncated is None else truncated,
        )

    def padded(self, length: int) -> np.ndarray:
        """Coefficient array zero-padded (or cut) to ``length`` entries."""
        out = np.zeros(length)
        n = min(length, self.coeffs.size)
        out[:n] = self.coeffs[:n]
        return out

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "origin": self.origin,
            "coeffs": [float(c) for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "FracPowerSeries":
        return cls(data["alpha"], data["coeffs"], data.get("origin", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "FracPowerSeries":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SampledSignal:
    """Values of a function on the uniform grid ``linspace(a, b, n_points)``."""

    a: float
    b: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not a < b:
            raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size < 2:
            raise DomainError("a sampled signal needs at least 2 points")
        if not np.all(np.isfinite(values)):
            raise DomainError("sampled values must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "values", values)

    @property
    def n_points(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n_points - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n_points)

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.a, self.b, values)

    @classmethod
    def from_function(cls, func, a, b, n_points) -> "SampledSignal":
        t = np.linspace(a, b, n_points)
        return cls(a, b, np.asarray(func(t), dtype=float) * np.ones_like(t))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "value"])
        for t, v in zip(self.grid, self.values):
            writer.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SampledSignal":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] == ["t", "value"]:
            rows = rows[1:]
        t = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[1]) for r in rows])
        if t.size >= 2:
            expected = np.linspace(t[0], t[-1], t.size)
            if not np.allclose(t, expected, rtol=0, atol=1e-12 * max(1.0, abs(t[-1]))):
                raise DomainError("CSV grid is not uniform")
        return cls(t[0], t[-1], v)


def eval_fps(s: FracPowerSeries, t):
    """Evaluate the series at ``t`` (scalar or array) by Horner's rule in ``(t - origin)**alpha``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < s.origin):
        raise DomainError(f"series with origin {s.origin} evaluated left of its origin")
    u = (t_arr - s.origin) ** s.alpha
    acc = np.zeros_like(u) + s.coeffs[-1]
    for c in s.coeffs[-2::-1]:
        acc = acc * u + c
    if np.ndim(t) == 0:
        return float(acc)
    return acc


def _check_compatible(s1: FracPowerSeries, s2: FracPowerSeries):
    if s1.alpha != s2.alpha:
        raise MismatchError(f"base orders differ: {s1.alpha} vs {s2.alpha}")
    if s1.origin != s2.origin:
        raise MismatchError(f"origins differ: {s1.origin} vs {s2.origin}")


def multiply_fps(s1: FracPowerSeries, s2: FracPowerSeries, max_length: int = MAX_SERIES_LENGTH):
    """Cauchy product of two series, cut to ``max_length`` coefficients.

    The result has ``len(s1) + len(s2) - 1`` coefficients unless that
    exceeds ``max_length``, in which case the ``truncated`` flag is set.
    """
    _check_compatible(s1, s2)
    full = np.convolve(s1.coeffs, s2.coeffs)
    cut = full.size > max_length
    return s1.with_coeffs(full[:max_length], truncated=cut or s1.truncated or s2.truncated)


def add_fps(s1: FracPowerSeries, s2: FracPowerSeries) -> FracPowerSeries:
    _check_compatible(s1, s2)
    n = max(len(s1), len(s2))
    return s1.with_coeffs(s1.padded(n) + s2.padded(n), truncated=s1.truncated or s2.truncated)


def scale_fps(s: FracPowerSeries, factor: float) -> FracPowerSeries:
    return s.with_coeffs(factor * s.coeffs)


def sample_fps(s: FracPowerSeries, b: float, n_points: int) -> SampledSignal:
    """Sample ``s`` on ``linspace(origin, b, n_points)``."""
    if not b > s.origin:
        raise DomainError(f"right endpoint {b} must exceed the origin {s.origin}")
    if n_points < 2 or int(n_points) != n_points:
        raise DomainError(f"n_points must be an integer >= 2, got {n_points!r}")
    t = np.linspace(s.origin, b, int(n_points))
    return SampledSignal(s.origin, b, eval_fps(s, t))


def _is_integer_multiple(mu: float, alpha: float, tol: float = 1e-12) -> int | None:
    q = mu / alpha
    n = round(q)
    if n >= 0 and abs(q - n) <= tol * max(1.0, abs(q)):
        return int(n)
    return None


def shift_count(mu: float, alpha: float) -> int | None:
    """Number of ``alpha`` steps in ``mu``, or ``None`` if ``mu`` is not a multiple."""
    return _is_integer_multiple(mu, alpha)


def norm_inf(sig: SampledSignal) -> float:
    """Grid supremum norm."""
    return float(np.max(np.abs(sig.values)))


def norm_l1(sig: SampledSignal) -> float:
    """Trapezoid-weighted L1 norm over the grid."""
    v = np.abs(sig.values)
    return float(sig.h * (v.sum() - 0.5 * (v[0] + v[-1])))

