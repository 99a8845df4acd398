"""Scaled floating point numbers ``mantissa * e**exponent``.

Coefficients of the Fourier solution carry factors like ``exp(b x / (2 a^2 eps))``
that leave double range long before the physical amplitude does.  Keeping
the exponent separately (an integer power of ``e``) lets the products and
sums be formed in log space and converted to a plain float only at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Overflow

_LOG_MAX = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class ScaledFloat:
    """Value ``mantissa * exp(exponent)`` with ``1 <= |mantissa| < e`` (or zero)."""

    mantissa: float
    exponent: int

    @classmethod
    def from_log(cls, log_abs: float, sign: float = 1.0) -> "ScaledFloat":
        if sign == 0 or log_abs == -math.inf:
            return ZERO
        e = math.floor(log_abs)
        return cls(math.copysign(math.exp(log_abs - e), sign), int(e))

    @classmethod
    def from_float(cls, value: float, exponent: float = 0.0) -> "ScaledFloat":
        """Normalise ``value * exp(exponent)`` without forming it."""
        if value == 0:
            return ZERO
        return cls.from_log(math.log(abs(value)) + exponent, math.copysign(1.0, value))

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    @property
    def sign(self) -> float:
        return 0.0 if self.mantissa == 0 else math.copysign(1.0, self.mantissa)

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def scale(self, log_factor: float) -> "ScaledFloat":
        """Multiply by ``exp(log_factor)``."""
        if self.mantissa == 0:
            return ZERO
        return ScaledFloat.from_log(self.log_abs + log_factor, self.sign)

    def __mul__(self, other):
        if not isinstance(other, ScaledFloat):
            other = ScaledFloat.from_float(float(other))
        if self.mantissa == 0 or other.mantissa == 0:
            return ZERO
        return ScaledFloat.from_log(self.log_abs + other.log_abs, self.sign * other.sign)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ScaledFloat):
            other = ScaledFloat.from_float(float(other))
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        top = max(self.exponent, other.exponent)
        total = self.mantissa * math.exp(self.exponent - top) + other.mantissa * math.exp(
            other.exponent - top
        )
        return ScaledFloat.from_float(total, top)

    __radd__ = __add__

    def __neg__(self):
        return ScaledFloat(-self.mantissa, self.exponent)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ScaledFloat) else -float(other))

    def __abs__(self):
        return ScaledFloat(abs(self.mantissa), self.exponent)

    def __float__(self):
        return self.to_float()

    def to_float(self) -> float:
        if self.mantissa == 0:
            return 0.0
        if self.log_abs > _LOG_MAX:
            raise Overflow(f"value e^{self.log_abs:.1f} exceeds double range")
        return self.mantissa * math.exp(self.exponent)


ZERO = ScaledFloat(0.0, 0)
