"""Finite-difference reference solvers and the equilibrium solution.

``solve_system`` integrates the first-order relaxation system by operator
splitting: upwind transport of the Riemann invariants ``v +- a u`` followed by
an exact solve of the linear relaxation ``v -> b u``.  ``solve_wave_fd``
discretises the equivalent damped wave equation with a three-level scheme and
shares no code with the first, so the two serve as independent oracles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .errors import CFLViolation, Divergence, MissingField, StiffnessWarning
from .model import FieldSnapshot, Grid, InitialData, ProblemSpec
from .numerics import fd_derivative

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class SchemeConfig:
    """Grid, Courant number ``a dt / dx`` and splitting for :func:`solve_system`.

    At ``cfl = 1`` the upwind transport is an exact shift along the
    characteristics, so the Strang variant is limited only by the splitting
    error; below one the first-order upwind diffusion dominates.
    """

    grid: Grid
    cfl: float = 1.0
    t_max: float = 1.0
    splitting: str = "strang"

    def __post_init__(self):
        if self.splitting not in ("strang", "lie"):
            raise ValueError(f"splitting must be 'strang' or 'lie', got {self.splitting!r}")
        if not 0 < self.cfl <= 1:
            raise CFLViolation(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.t_max < 0:
            raise ValueError("t_max must be >= 0")

    def dt(self, a: float) -> float:
        return self.cfl * self.grid.dx / a


@dataclass
class Trajectory:
    snapshots: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def x(self) -> np.ndarray:
        return self.snapshots[0].x

    def u(self) -> np.ndarray:
        return np.array([s.u for s in self.snapshots])

    def v(self) -> np.ndarray:
        if any(s.v is None for s in self.snapshots):
            raise MissingField("trajectory has no v field")
        return np.array([s.v for s in self.snapshots])

    def at(self, t: float) -> FieldSnapshot:
        for s in self.snapshots:
            if math.isclose(s.t, t, rel_tol=0, abs_tol=1e-12):
                return s
        raise KeyError(f"no snapshot at t={t}")

    def __len__(self):
        return len(self.snapshots)


def _output_schedule(output_times: Optional[Sequence[float]], t_max: float) -> list[float]:
    times = sorted({float(t) for t in (output_times if output_times is not None else [t_max])})
    if any(t < 0 for t in times):
        raise ValueError("output times must be >= 0")
    if times and times[0] != 0.0:
        times.insert(0, 0.0)
    return times or [0.0]


def initial_v(data: InitialData, x: np.ndarray) -> np.ndarray:
    """``g(x) = g0 + int_0^x g'`` by cumulative trapezoid on the grid."""
    gp = np.asarray(data.gprime(x), dtype=float) * np.ones_like(x)
    return data.g0 + cumulative_trapezoid(gp, x, initial=0.0)


def _check_finite(u, v, t):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))) or max(
        np.max(np.abs(u)), np.max(np.abs(v))
    ) > DIVERGENCE_LIMIT:
        raise Divergence(f"solution exceeded {DIVERGENCE_LIMIT:g} at t={t:.6g}")


def solve_system(spec: ProblemSpec, data: InitialData, cfg: SchemeConfig,
                 output_times: Optional[Sequence[float]] = None) -> Trajectory:
    """Advance ``(u, v)`` of the relaxation system and record snapshots.

    Strang splitting is relax(dt/2), transport(dt), relax(dt/2); Lie is
    transport(dt), relax(dt).  The walls impose ``u = 0``; ``v`` there is taken
    from the outgoing invariant, ``v(0) = (v - a u)(0)`` and
    ``v(1) = (v + a u)(1)``.
    """
    a, b, eps = spec.a, spec.b, spec.epsilon
    x = cfg.grid.points
    dx = cfg.grid.dx
    dt_max = cfg.dt(a)
    u = np.asarray(data.f(x), dtype=float) * np.ones_like(x)
    u[0] = u[-1] = 0.0
    v = initial_v(data, x)

    def advect(u, v, dt):
        nu = a * dt / dx
        wp = v + a * u
        wm = v - a * u
        wp[1:] -= nu * (wp[1:] - wp[:-1])
        wm[:-1] += nu * (wm[1:] - wm[:-1])
        wp[0] = wm[0]
        wm[-1] = wp[-1]
        u = (wp - wm) / (2 * a)
        u[0] = u[-1] = 0.0
        return u, 0.5 * (wp + wm)

    def relax(u, v, dt):
        eq = b * u
        return u, eq + (v - eq) * math.exp(-dt / eps)

    schedule = _output_schedule(output_times, cfg.t_max)
    traj = Trajectory([FieldSnapshot(0.0, u.copy(), v.copy())])
    t = 0.0
    step = 0
    for t_out in schedule[1:]:
        while t < t_out - 1e-14:
            dt = min(dt_max, t_out - t)
            if cfg.splitting == "strang":
                u, v = relax(u, v, 0.5 * dt)
                u, v = advect(u, v, dt)
                u, v = relax(u, v, 0.5 * dt)
            else:
                u, v = advect(u, v, dt)
                u, v = relax(u, v, dt)
            t = t_out if t_out - (t + dt) < 1e-14 else t + dt
            step += 1
            if step % 64 == 0:
                _check_finite(u, v, t)
        _check_finite(u, v, t)
        traj.snapshots.append(FieldSnapshot(t_out, u.copy(), v.copy()))
    return traj


def solve_wave_fd(spec: ProblemSpec, data: InitialData, cfg: SchemeConfig,
                  output_times: Optional[Sequence[float]] = None) -> Trajectory:
    """Three-level scheme for ``u_tt - a^2 u_xx + (b u_x + u_t) / eps = 0``.

    Centred differences in space and time; the damping term is taken
    implicitly as ``(u^{n+1} - u^{n-1}) / (2 dt eps)``.  Snapshots between
    time levels are linearly interpolated.
    """
    a, b, eps = spec.a, spec.b, spec.epsilon
    x = cfg.grid.points
    dx = cfg.grid.dx
    schedule = _output_schedule(output_times, cfg.t_max)
    t_end = schedule[-1]
    n_steps = max(1, math.ceil(t_end / cfg.dt(a) - 1e-9)) if t_end > 0 else 0
    dt = t_end / n_steps if n_steps else cfg.dt(a)
    if abs(b) * dt / (eps * dx) > 2:
        warnings.warn(
            f"b*dt/(eps*dx) = {abs(b) * dt / (eps * dx):.3g} > 2; drift term is under-resolved",
            StiffnessWarning, stacklevel=2,
        )

    f0 = np.asarray(data.f(x), dtype=float) * np.ones_like(x)
    gp = np.asarray(data.gprime(x), dtype=float) * np.ones_like(x)
    fx = fd_derivative(data.f, x, 1, lo=0.0, hi=1.0)
    fxx = fd_derivative(data.f, x, 2, lo=0.0, hi=1.0)
    u_prev = f0.copy()
    u_prev[0] = u_prev[-1] = 0.0
    u_cur = f0 - dt * gp + 0.5 * dt**2 * (a * a * fxx - (b * fx - gp) / eps)
    u_cur[0] = u_cur[-1] = 0.0

    lhs = 1 / dt**2 + 1 / (2 * eps * dt)
    r2 = (a / dx) ** 2
    drift = b / (2 * eps * dx)

    traj = Trajectory([FieldSnapshot(0.0, u_prev.copy())])
    pending = list(schedule[1:])
    level = 1
    t_cur = dt

    def emit_until(t_hi, u_lo, u_hi, t_lo):
        while pending and pending[0] <= t_hi + 1e-12:
            t_out = pending.pop(0)
            theta = 0.0 if t_hi == t_lo else (t_out - t_lo) / (t_hi - t_lo)
            traj.snapshots.append(FieldSnapshot(t_out, (1 - theta) * u_lo + theta * u_hi))

    emit_until(t_cur, u_prev, u_cur, 0.0)
    while pending and level < n_steps + 1:
        nxt = np.zeros_like(u_cur)
        inner = u_cur[1:-1]
        lap = r2 * (u_cur[2:] - 2 * inner + u_cur[:-2])
        adv = drift * (u_cur[2:] - u_cur[:-2])
        nxt[1:-1] = (
            (2 * inner - u_prev[1:-1]) / dt**2 + lap - adv
            + u_prev[1:-1] / (2 * eps * dt)
        ) / lhs
        u_prev, u_cur = u_cur, nxt
        level += 1
        t_lo, t_cur = t_cur, level * dt
        if level % 64 == 0:
            _check_finite(u_cur, u_cur, t_cur)
        emit_until(t_cur, u_prev, u_cur, t_lo)
    _check_finite(u_cur, u_cur, t_cur)
    return traj


def equilibrium_u(spec: ProblemSpec, data: InitialData, x, t: float):
    """Solution of ``u_t + b u_x = 0`` with zero inflow datum.

    ``b < 0`` enters through ``x = 1`` and ``b > 0`` through ``x = 0``; for
    ``b = 0`` the state is frozen at ``f``.
    """
    b = spec.b
    x_arr = np.asarray(x, dtype=float)
    xi = x_arr - b * t
    if b < 0:
        inside = x_arr <= 1 + b * t
    elif b > 0:
        inside = x_arr >= b * t
    else:
        inside = np.ones_like(x_arr, dtype=bool)
    vals = np.zeros_like(xi)
    if np.any(inside):
        vals[inside] = np.asarray(data.f(xi[inside]), dtype=float)
    if np.ndim(x) == 0:
        return float(vals)
    return vals


def equilibrium_deviation(traj: Trajectory, spec: ProblemSpec) -> np.ndarray:
    """``int_0^1 (v - b u)^2 dx`` at each snapshot time."""
    x = traj.x
    return np.array([trapezoid((s.v - spec.b * s.u) ** 2, x) if s.v is not None
                     else _missing() for s in traj.snapshots])


def _missing():
    raise MissingField("equilibrium deviation needs the v field")
