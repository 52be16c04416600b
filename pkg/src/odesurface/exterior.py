"""Log-scaled vectors and Gram-determinant formulas for wedge products.

A vector is stored as ``mantissa * exp(log_scale)`` with the largest
mantissa entry normalised into [1/2, 1).  Inner products of 2- and
3-blades are Gram determinants of the dot-product matrix.  Every term of
such a determinant uses each input vector exactly once, so the scale of
the result is simply the sum of the input scales and the determinant is
taken on mantissas only.  Mantissas are binary fractions, so dot products
and determinants are formed exactly in rational arithmetic and rounded
once; near-dependent blades keep full relative accuracy and a Gram
determinant can never come out negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScaledScalar:
    """The real number ``mantissa * exp(log_scale)``."""

    mantissa: float
    log_scale: float = 0.0

    @classmethod
    def of(cls, mantissa: float, log_scale: float = 0.0) -> "ScaledScalar":
        if mantissa == 0.0 or not math.isfinite(mantissa):
            return cls(float(mantissa), 0.0 if mantissa == 0.0 else log_scale)
        m, e = math.frexp(mantissa)
        return cls(m, log_scale + e * _LN2)

    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def to_float(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        try:
            return math.copysign(math.exp(self.log_abs()), self.mantissa)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    def __mul__(self, other: "ScaledScalar") -> "ScaledScalar":
        return ScaledScalar.of(self.mantissa * other.mantissa, self.log_scale + other.log_scale)

    def __truediv__(self, other: "ScaledScalar") -> "ScaledScalar":
        if other.mantissa == 0.0:
            raise ZeroDivisionError("division by a zero ScaledScalar")
        return ScaledScalar.of(self.mantissa / other.mantissa, self.log_scale - other.log_scale)

    def sqrt(self) -> "ScaledScalar":
        if self.mantissa < 0.0:
            raise ValueError("square root of a negative ScaledScalar")
        return ScaledScalar.of(math.sqrt(self.mantissa), 0.5 * self.log_scale)

    def pow(self, p: float) -> "ScaledScalar":
        if self.mantissa < 0.0:
            raise ValueError("power of a negative ScaledScalar")
        if self.mantissa == 0.0:
            return ScaledScalar(0.0, 0.0)
        return ScaledScalar.of(self.mantissa**p, p * self.log_scale)


@dataclass(frozen=True, eq=False)
class ScaledVector:
    """The vector ``mantissa * exp(log_scale)``."""

    mantissa: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.mantissa, dtype=float)
        if m.ndim != 1:
            raise ContractViolation("ScaledVector mantissa must be one-dimensional")
        object.__setattr__(self, "mantissa", m)

    @classmethod
    def of(cls, values, log_scale: float = 0.0) -> "ScaledVector":
        """Normalise so the largest mantissa entry lies in [1/2, 1)."""
        v = np.asarray(values, dtype=float)
        peak = float(np.max(np.abs(v))) if v.size else 0.0
        if peak == 0.0 or not math.isfinite(peak):
            return cls(v, log_scale)
        _, e = math.frexp(peak)
        return cls(np.ldexp(v, -e), log_scale + e * _LN2)

    @classmethod
    def from_logs(cls, signs, logs) -> "ScaledVector":
        """Build from per-entry signs and natural logs of magnitudes."""
        logs = np.asarray(logs, dtype=float)
        top = float(np.max(logs))
        return cls.of(np.asarray(signs, dtype=float) * np.exp(logs - top), top)

    @property
    def dim(self) -> int:
        return self.mantissa.shape[0]

    def to_array(self) -> np.ndarray:
        return self.mantissa * math.exp(self.log_scale)

    def __eq__(self, other):
        if not isinstance(other, ScaledVector):
            return NotImplemented
        return self.log_scale == other.log_scale and np.array_equal(self.mantissa, other.mantissa)

    __hash__ = None


def _check_dims(*vs: ScaledVector) -> None:
    n = vs[0].dim
    if any(v.dim != n for v in vs):
        raise ContractViolation(f"dimension mismatch: {[v.dim for v in vs]}")


def _rational(v: ScaledVector):
    return [Q(float(x)) for x in v.mantissa]


def _qdot(u, v):
    return sum((x * y for x, y in zip(u, v)), Q(0))


def _from_rational(q, log_scale: float) -> ScaledScalar:
    """Round an exact rational once, keeping its binary exponent in the scale."""
    if q == 0:
        return ScaledScalar(0.0, 0.0)
    num, den = q.numerator, q.denominator
    e = int(abs(num)).bit_length() - int(den).bit_length()
    m = float(Q(num, den) / Q(2) ** e) if e >= 0 else float(Q(num, den) * Q(2) ** (-e))
    return ScaledScalar.of(m, log_scale + e * _LN2)


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _gram(us, vs):
    """Exact Gram determinant of the mantissas and the summed log-scale."""
    _check_dims(*us, *vs)
    qu = [_rational(u) for u in us]
    qv = qu if us is vs else [_rational(v) for v in vs]
    m = [[_qdot(a, b) for b in qv] for a in qu]
    det = _det2(m) if len(us) == 2 else _det3(m)
    return det, sum(w.log_scale for w in us) + sum(w.log_scale for w in vs)


def dot(u: ScaledVector, v: ScaledVector) -> ScaledScalar:
    _check_dims(u, v)
    return _from_rational(_qdot(_rational(u), _rational(v)), u.log_scale + v.log_scale)


def gram_inner_pair(u1, u2, v1, v2) -> ScaledScalar:
    """``(u1 ^ u2, v1 ^ v2)`` as the 2x2 determinant of dot products."""
    return _from_rational(*_gram((u1, u2), (v1, v2)))


def wedge2_norm(u: ScaledVector, v: ScaledVector) -> ScaledScalar:
    us = (u, v)
    return _from_rational(*_gram(us, us)).sqrt()


def gram_inner_triple(u1, u2, u3, v1, v2, v3) -> ScaledScalar:
    """``(u1 ^ u2 ^ u3, v1 ^ v2 ^ v3)`` as a 3x3 Gram determinant."""
    return _from_rational(*_gram((u1, u2, u3), (v1, v2, v3)))


def wedge3_norm(u1, u2, u3) -> ScaledScalar:
    us = (u1, u2, u3)
    return _from_rational(*_gram(us, us)).sqrt()
