"""Discrete energy functionals and empirical constants of the energy bounds.

Both bounds have the form ``lhs(t) <= C * scale(eps) * rhs(t)`` with an
unquantified ``C``; the reports carry the per-time ratio so that
ε-stability of the constant can be checked over a sweep.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .asymptotics import LayerProfile, derivative_sup, layer_fields
from .errors import EmptyTrajectory, HypothesisViolation, KinkWarning, WrongSign
from .model import FieldSnapshot, InitialData, ProblemSpec
from .numerics import fd_derivative, gauss_panels
from .reference import Trajectory


@dataclass(frozen=True)
class Norms:
    times: np.ndarray
    spatial: np.ndarray      # int u^2 dx per snapshot
    cumulative: np.ndarray   # int_0^t int u^2 dx ds


def l2_squared(values, x) -> float:
    return float(trapezoid(np.asarray(values, dtype=float) ** 2, x))


def norms(obj) -> Norms:
    """Squared L2 norms of a snapshot or each snapshot of a trajectory."""
    if isinstance(obj, FieldSnapshot):
        val = l2_squared(obj.u, obj.x)
        return Norms(np.array([obj.t]), np.array([val]), np.array([0.0]))
    snaps = list(obj.snapshots if isinstance(obj, Trajectory) else obj)
    if not snaps:
        raise EmptyTrajectory("no snapshots to integrate")
    times = np.array([s.t for s in snaps])
    spatial = np.array([l2_squared(s.u, s.x) for s in snaps])
    return Norms(times, spatial, _cumulative(spatial, times))


def _cumulative(values, times) -> np.ndarray:
    if len(times) < 2:
        return np.zeros(len(times))
    return cumulative_trapezoid(values, times, initial=0.0)


def _field_integral(fn, panels: int = 64) -> float:
    nodes, weights = gauss_panels(panels)
    return float(np.sum(weights * np.asarray(fn(nodes), dtype=float) * np.ones_like(nodes)))


@dataclass(frozen=True)
class EnergyReport:
    times: np.ndarray
    lhs: np.ndarray
    rhs_data: np.ndarray
    c_empirical: np.ndarray
    epsilon: float

    def at(self, t: float) -> tuple[float, float, float]:
        i = int(np.argmin(np.abs(self.times - t)))
        return float(self.lhs[i]), float(self.rhs_data[i]), float(self.c_empirical[i])

    def rows(self) -> list[dict]:
        return [
            {"t": t, "lhs": l, "rhs_data": r, "c_empirical": c}
            for t, l, r, c in zip(self.times, self.lhs, self.rhs_data, self.c_empirical)
        ]


def _ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.zeros_like(num)
    pos = den > 0
    out[pos] = num[pos] / den[pos]
    return out


def _snapshots(traj) -> list[FieldSnapshot]:
    snaps = list(traj.snapshots if isinstance(traj, Trajectory) else traj)
    if not snaps:
        raise EmptyTrajectory("no snapshots in solver output")
    return snaps


def corrector_b0(traj, data: InitialData) -> np.ndarray:
    """``w = u - f`` per snapshot (rows), the deviation from the frozen state."""
    snaps = _snapshots(traj)
    x = snaps[0].x
    f0 = np.asarray(data.f(x), dtype=float) * np.ones_like(x)
    return np.array([s.u for s in snaps]) - f0


def rhs_thm31(data: InitialData, times) -> np.ndarray:
    """``int g'^2 + t int (f'^2 + f''^2)``."""
    g2 = _field_integral(lambda x: np.asarray(data.gprime(x), dtype=float) ** 2)
    f12 = _field_integral(
        lambda x: fd_derivative(data.f, x, 1, lo=0.0, hi=1.0) ** 2
        + fd_derivative(data.f, x, 2, lo=0.0, hi=1.0) ** 2
    )
    return g2 + np.asarray(times, dtype=float) * f12


def verify_thm31(a: float, epsilon: float, data: InitialData, solver_output,
                 b: float = 0.0) -> EnergyReport:
    """Energy of ``w = u - f`` for the undrifted problem.

    ``lhs = int w^2 + int_0^t int w_t^2`` with ``w_t`` from centred differences
    of consecutive snapshots; ``c_empirical = lhs / (eps * rhs_data)``.
    """
    if b != 0:
        raise HypothesisViolation(f"the undrifted energy bound needs b = 0, got b={b}")
    if not epsilon < 0.25:
        raise HypothesisViolation(f"the undrifted energy bound needs eps < 1/4, got {epsilon}")
    snaps = _snapshots(solver_output)
    times = np.array([s.t for s in snaps])
    x = snaps[0].x
    w = corrector_b0(snaps, data)
    w2 = trapezoid(w**2, x, axis=1)
    if len(times) >= 2:
        wt = np.gradient(w, times, axis=0)
        wt2 = _cumulative(trapezoid(wt**2, x, axis=1), times)
    else:
        wt2 = np.zeros(1)
    lhs = w2 + wt2
    rhs = rhs_thm31(data, times)
    return EnergyReport(times, lhs, rhs, _ratio(lhs, epsilon * rhs), epsilon)


def rhs_thm33(spec: ProblemSpec, data: InitialData, times) -> np.ndarray:
    """``eps^2 t [int(g'^2 + b^2 f'^2) + f'(0)^2 + f''(0)^2] + eps t^2 max sum |f^(i)|^2``.

    Evaluated in the ``a = 1`` normalisation with ``b < 0`` (reflected if needed).
    """
    prof = LayerProfile.build(spec, data)
    b, eps, f = prof.b, prof.eps, prof.f
    src = data.mirrored() if prof.reflected else data
    gscale = 1.0 / spec.a
    bracket = _field_integral(
        lambda x: (gscale * np.asarray(src.gprime(x), dtype=float)) ** 2
        + b * b * fd_derivative(f, x, 1, lo=0.0, hi=1.0) ** 2
    )
    bracket += fd_derivative(f, 0.0, 1, lo=0.0, hi=1.0) ** 2
    bracket += fd_derivative(f, 0.0, 2, lo=0.0, hi=1.0) ** 2
    tau = spec.a * np.asarray(times, dtype=float)
    return eps**2 * tau * bracket + eps * tau**2 * derivative_sup(f)


def verify_thm33(spec: ProblemSpec, data: InitialData, traj) -> EnergyReport:
    """Energy of the layer corrector ``w = u - u_e - U0 - eps U1``.

    ``lhs = int w^2 + int_0^t int w^2``; ``c_empirical = lhs / rhs`` with the
    right side of :func:`rhs_thm33`.
    """
    if spec.b == 0:
        raise WrongSign("the layer energy bound needs b != 0")
    snaps = _snapshots(traj)
    times = np.array([s.t for s in snaps])
    x = snaps[0].x
    w2 = np.empty(len(snaps))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KinkWarning)
        for i, s in enumerate(snaps):
            ue, U0, eU1 = layer_fields(spec, data, x, s.t)
            w2[i] = trapezoid((s.u - ue - U0 - eU1) ** 2, x)
    # integrate in the normalised time so the bound's t-powers match
    lhs = w2 + _cumulative(w2, spec.a * times)
    rhs = rhs_thm33(spec, data, times)
    return EnergyReport(times, lhs, rhs, _ratio(lhs, rhs), spec.epsilon)


def slope_estimate(eps_values: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log(values)`` against ``log(eps)``."""
    e = np.log(np.asarray(eps_values, dtype=float))
    v = np.asarray(values, dtype=float)
    if len(e) < 2 or np.any(v <= 0):
        return math.nan
    return float(np.polyfit(e, np.log(v), 1)[0])


def spread(values: Sequence[float]) -> float:
    """``max / min`` of positive values."""
    v = np.asarray(values, dtype=float)
    return float(np.max(v) / np.min(v))
