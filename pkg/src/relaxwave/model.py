"""Problem definition shared by every solver.

The model problem on the strip ``0 <= x <= 1``, ``t >= 0`` is

    u_t + v_x = 0,    v_t + a^2 u_x = (b u - v) / eps,
    u(0, t) = u(1, t) = 0,    u(x, 0) = f(x),    v(x, 0) = g(x),

or equivalently the damped wave equation

    u_tt - a^2 u_xx + (b u_x + u_t) / eps = 0,   u_t(x, 0) = -g'(x).

Only ``g'`` enters the scalar formulation, so initial data are given as
``f`` and ``gprime``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    DomainError,
    EvaluationError,
    NonpositiveParameter,
    SubcharacteristicViolation,
)
from .exprparse import Function

TOL_COMPAT = 1e-10


@dataclass(frozen=True)
class ProblemSpec:
    """Wave speed ``a``, equilibrium drift ``b`` and relaxation time ``epsilon``.

    Construction enforces ``a > 0``, ``epsilon > 0`` and the
    subcharacteristic condition ``|b| < a``.
    """

    a: float
    b: float
    epsilon: float

    def __post_init__(self):
        for name in ("a", "b", "epsilon"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonpositiveParameter(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.a <= 0:
            raise NonpositiveParameter(f"a must be positive, got {self.a}")
        if self.epsilon <= 0:
            raise NonpositiveParameter(f"epsilon must be positive, got {self.epsilon}")
        if abs(self.b) >= self.a:
            raise SubcharacteristicViolation(
                f"|b| < a required, got a={self.a}, b={self.b}"
            )

    @property
    def weight_rate(self) -> float:
        """Rate ``b / (2 a^2 eps)`` of the exponential factor in every mode."""
        return self.b / (2.0 * self.a**2 * self.epsilon)

    def with_epsilon(self, epsilon: float) -> "ProblemSpec":
        return ProblemSpec(self.a, self.b, epsilon)


def validate_spec(a: float, b: float, epsilon: float) -> ProblemSpec:
    return ProblemSpec(a, b, epsilon)


ScalarFn = Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]


def _as_function(value) -> ScalarFn:
    if isinstance(value, str):
        return Function(value)
    if callable(value):
        return value
    raise TypeError(f"expected an expression string or callable, got {type(value)!r}")


@dataclass(frozen=True)
class InitialData:
    """Initial displacement ``f`` and the derivative ``gprime`` of ``v(x, 0)``.

    Both accept an expression string (see :mod:`relaxwave.exprparse`) or a
    vectorised callable. ``g0`` is the value ``v(0, 0)``; it only matters to
    the first-order system solver.
    """

    f: ScalarFn
    gprime: ScalarFn
    g0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "f", _as_function(self.f))
        object.__setattr__(self, "gprime", _as_function(self.gprime))

    @classmethod
    def from_strings(cls, f: str, gprime: str, g0: float = 0.0) -> "InitialData":
        return cls(Function(f), Function(gprime), g0)

    def mirrored(self) -> "InitialData":
        """Data for the reflected problem ``x -> 1 - x`` (which flips ``b``)."""
        f, gp = self.f, self.gprime
        return InitialData(lambda x: f(1.0 - np.asarray(x)), lambda x: gp(1.0 - np.asarray(x)))

    @property
    def is_zero(self) -> bool:
        xs = np.linspace(0.0, 1.0, 65)
        return bool(np.all(self.f(xs) == 0) and np.all(self.gprime(xs) == 0))


@dataclass(frozen=True)
class CompatibilityReport:
    values: dict
    tol: float
    passed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.passed.items() if not v]


def check_compatibility(data: InitialData, tol_compat: float = TOL_COMPAT) -> CompatibilityReport:
    """Check ``f(0) = f(1) = 0`` and ``g'(0) = g'(1) = 0``."""
    values = {}
    for label, fn in (("f", data.f), ("gprime", data.gprime)):
        for x in (0.0, 1.0):
            key = f"{label}({x:g})"
            try:
                val = float(fn(x))
            except DomainError as exc:
                raise EvaluationError(f"{label} is singular at x={x:g}: {exc}") from exc
            except (ZeroDivisionError, ValueError, OverflowError) as exc:
                raise EvaluationError(f"{label} is singular at x={x:g}: {exc}") from exc
            if not math.isfinite(val):
                raise EvaluationError(f"{label}({x:g}) is not finite")
            values[key] = val
    passed = {k: abs(v) <= tol_compat for k, v in values.items()}
    return CompatibilityReport(values, tol_compat, passed)


@dataclass(frozen=True)
class Grid:
    """Uniform vertex grid ``x_j = j / m``, ``j = 0..m``."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def dx(self) -> float:
        return 1.0 / self.m

    @property
    def points(self) -> np.ndarray:
        x = np.arange(self.m + 1, dtype=float) / self.m
        x[-1] = 1.0
        return x


@dataclass(frozen=True)
class FieldSnapshot:
    t: float
    u: np.ndarray
    v: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return len(self.u) - 1

    @property
    def x(self) -> np.ndarray:
        return Grid(self.m).points
