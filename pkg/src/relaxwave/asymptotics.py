"""Boundary-layer expansion for the small-relaxation limit.

For ``b < 0`` the equilibrium state ``u_e`` travels to the left and violates
the wall condition at ``x = 0``; the expansion

    u_eps(x, t) = u_e(x, t) + U0(y, t) + eps U1(y, t) + w(x, t),   y = x / eps,

restores it with ``U0 = c(t) e^{b y}`` and

    U1 = c'(t)/b [(y - 1/b) e^{b y} + 1/b] + d(t)/b (e^{b y} - 1),

where ``c(t) = -f(-b t)`` (zero once ``t > -1/b``) and ``d(t)`` makes
``U0 + eps U1`` vanish at ``x = 1``.

The closed forms assume ``a = 1``.  A general problem is rescaled with
``tau = a t``, ``b -> b/a``, ``eps -> a eps`` and ``g' -> g'/a``, which maps the
damped wave equation onto the ``a = 1`` form; for ``b > 0`` the problem is
reflected with ``x -> 1 - x`` so the layer sits at ``x = 1``.
:class:`LayerProfile` holds the normalised, reflected parameters and its
methods take the normalised time ``tau``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .errors import GridMismatch, KinkWarning, WrongSign
from .model import FieldSnapshot, InitialData, ProblemSpec
from .numerics import fd_derivative
from .reference import equilibrium_u

KINK_TOL = 1e-6


def layer_c(data: InitialData, b: float, t: float, order: int = 0) -> float:
    """``c(t) = -f(-b t)`` for ``t <= -1/b``, else 0 (``b < 0``, ``a = 1``).

    ``order > 0`` returns the ``order``-th time derivative through the chain
    rule, with the derivatives of ``f`` taken by finite differences.
    """
    if b >= 0:
        raise WrongSign(f"layer_c needs b < 0 (reflect first), got b={b}")
    t_kink = -1.0 / b
    if order > 0 and abs(t - t_kink) < KINK_TOL:
        warnings.warn(f"c(t) is not differentiable at t={t_kink:g}", KinkWarning, stacklevel=2)
    if t > t_kink:
        return 0.0
    s = min(-b * t, 1.0)
    if order == 0:
        return -float(data.f(s))
    deriv = fd_derivative(data.f, s, order, lo=0.0, hi=1.0)
    return -((-b) ** order) * float(deriv)


def _d_weights(b: float, eps: float) -> tuple[float, float]:
    """``(A, B)`` with ``d(t) = A c(t) + B c'(t)``; ``e^{b/eps}`` kept in log space."""
    log_e = b / eps
    one_minus = -math.expm1(log_e)
    e_over_eps = math.exp(log_e - math.log(eps))
    e_val = math.exp(log_e)
    A = b * e_over_eps / one_minus
    B = (e_over_eps - e_val / b + 1 / b) / one_minus
    return A, B


@dataclass(frozen=True)
class LayerProfile:
    """Layer functions of the normalised (``a = 1``, ``b < 0``) problem."""

    spec: ProblemSpec
    data: InitialData
    b: float
    eps: float
    reflected: bool
    f: object

    @classmethod
    def build(cls, spec: ProblemSpec, data: InitialData) -> "LayerProfile":
        if spec.b == 0:
            raise WrongSign("no boundary layer for b = 0")
        b_hat = spec.b / spec.a
        eps_hat = spec.a * spec.epsilon
        reflected = b_hat > 0
        f = data.mirrored().f if reflected else data.f
        return cls(spec, data, -abs(b_hat), eps_hat, reflected, f)

    @property
    def _norm_data(self) -> InitialData:
        return InitialData(self.f, lambda x: np.zeros_like(np.asarray(x, dtype=float)))

    def tau(self, t: float) -> float:
        return self.spec.a * t

    def c(self, tau: float, order: int = 0) -> float:
        return layer_c(self._norm_data, self.b, tau, order)

    def d(self, tau: float, order: int = 0) -> float:
        A, B = _d_weights(self.b, self.eps)
        return A * self.c(tau, order) + B * self.c(tau, order + 1)

    def d_limit(self, tau: float) -> float:
        """``c'(t) / b``, the ``eps -> 0`` limit of ``d``."""
        return self.c(tau, 1) / self.b

    def U(self, y, tau: float, order: int, t_order: int = 0):
        """``U0`` (``order=0``) or ``U1`` (``order=1``), or their ``t_order``-th time derivative."""
        y = np.asarray(y, dtype=float)
        b = self.b
        eby = np.exp(b * y)
        if order == 0:
            return self.c(tau, t_order) * eby
        if order == 1:
            c1 = self.c(tau, t_order + 1)
            dd = self.d(tau, t_order)
            return c1 / b * ((y - 1 / b) * eby + 1 / b) + dd / b * (eby - 1)
        raise ValueError("order must be 0 or 1")

    def wall_coordinate(self, x):
        """Stretched distance ``y`` from the layer wall for original ``x``."""
        x = np.asarray(x, dtype=float)
        return ((1.0 - x) if self.reflected else x) / self.eps


def layer_d(spec: ProblemSpec, data: InitialData, t: float) -> tuple[float, float]:
    """``(d(t), c'(t)/b)`` for the normalised problem at original time ``t``."""
    prof = LayerProfile.build(spec, data)
    tau = prof.tau(t)
    return prof.d(tau), prof.d_limit(tau)


def layer_U(profile: LayerProfile, y, tau: float, order: int):
    return profile.U(y, tau, order)


def layer_residuals(profile: LayerProfile, y, tau: float, h: float = 1e-3):
    """Finite-difference residuals of the two layer equations.

    Returns ``(r0, r1)`` with ``r0 = -U0_yy + b U0_y`` and
    ``r1 = U0_t - U1_yy + b U1_y``; both vanish for the exact profiles.
    """
    y = np.asarray(y, dtype=float)
    b = profile.b

    def d_y(order, k):
        return fd_derivative(lambda yy: profile.U(yy, tau, order), y, k, h=h)

    r0 = -d_y(0, 2) + b * d_y(0, 1)
    r1 = profile.U(y, tau, 0, t_order=1) - d_y(1, 2) + b * d_y(1, 1)
    return r0, r1


def boundary_mismatch(profile: LayerProfile, tau: float) -> tuple[float, float]:
    """``(U0 + eps U1)(0) + u_e(wall)`` and ``(U0 + eps U1)(1/eps)``."""
    eps = profile.eps
    at_wall = profile.U(0.0, tau, 0) + eps * profile.U(0.0, tau, 1)
    b = profile.b
    ue_wall = float(profile.f(-b * tau)) if tau <= -1 / b else 0.0
    at_far = profile.U(1 / eps, tau, 0) + eps * profile.U(1 / eps, tau, 1)
    return float(at_wall + ue_wall), float(at_far)


@dataclass(frozen=True)
class CorrectorField:
    x: np.ndarray
    t: float
    u_eps: np.ndarray
    u_e: np.ndarray
    U0: np.ndarray
    eps_U1: np.ndarray
    w: np.ndarray

    @property
    def w_l2sq(self) -> float:
        return float(trapezoid(self.w**2, self.x))

    @property
    def deviation_l2sq(self) -> float:
        """``int (u_eps - u_e)^2 dx``."""
        return float(trapezoid((self.u_eps - self.u_e) ** 2, self.x))

    def rows(self) -> list[dict]:
        return [
            {"x": x, "u_eps": a, "u_e": b, "U0": c, "eps_U1": d, "w": e}
            for x, a, b, c, d, e in zip(self.x, self.u_eps, self.u_e, self.U0, self.eps_U1, self.w)
        ]


def layer_fields(spec: ProblemSpec, data: InitialData, x, t: float):
    """``(u_e, U0, eps U1)`` at original points ``x`` and time ``t``."""
    prof = LayerProfile.build(spec, data)
    tau = prof.tau(t)
    y = prof.wall_coordinate(x)
    ue = equilibrium_u(spec, data, x, t)
    return ue, prof.U(y, tau, 0), prof.eps * prof.U(y, tau, 1)


def corrector(spec: ProblemSpec, data: InitialData, u_eps: FieldSnapshot, t: float,
              x: Optional[np.ndarray] = None) -> CorrectorField:
    """``w = u_eps - u_e - U0 - eps U1`` on the snapshot grid."""
    u = np.asarray(u_eps.u, dtype=float)
    if u.ndim != 1 or len(u) < 3:
        raise GridMismatch("snapshot must hold a 1-D field with at least 3 points")
    if not math.isclose(u_eps.t, t, rel_tol=0, abs_tol=1e-12):
        raise GridMismatch(f"snapshot time {u_eps.t} does not match t={t}")
    grid_x = u_eps.x
    if x is not None:
        x = np.asarray(x, dtype=float)
        if x.shape != grid_x.shape or not np.allclose(x, grid_x, atol=1e-14):
            raise GridMismatch("x does not match the snapshot grid")
    ue, U0, eU1 = layer_fields(spec, data, grid_x, t)
    w = u - ue - U0 - eU1
    return CorrectorField(grid_x, t, u, ue, U0, eU1, w)


def forcing_G(spec: ProblemSpec, data: InitialData, x, t: float):
    """Forcing of the corrector equation in the normalised variables.

    ``G = (u_e,tt - u_e,xx) + (eps U1_tt + U1_t + U0_tt)`` with
    ``u_e,tt - u_e,xx = (b^2 - 1) f''(x - b t)`` on the smooth branch of
    ``u_e`` and zero behind the inflow front.  ``x`` is the original
    coordinate, ``t`` the original time.
    """
    prof = LayerProfile.build(spec, data)
    b, eps = prof.b, prof.eps
    tau = prof.tau(t)
    x = np.asarray(x, dtype=float)
    # distance from the inflow wall in the normalised frame
    xr = (1.0 - x) if prof.reflected else x
    front = 1 + b * tau
    if np.any(np.abs(xr - front) < KINK_TOL):
        warnings.warn("u_e has a kink at the inflow front", KinkWarning, stacklevel=2)
    smooth = xr <= front
    ue_part = np.zeros_like(xr)
    if np.any(smooth):
        arg = np.clip(xr[smooth] - b * tau, 0.0, 1.0)
        ue_part[smooth] = (b * b - 1) * fd_derivative(prof.f, arg, 2, lo=0.0, hi=1.0)
    y = xr / eps
    layer_part = eps * prof.U(y, tau, 1, 2) + prof.U(y, tau, 1, 1) + prof.U(y, tau, 0, 2)
    out = ue_part + layer_part
    if np.ndim(x) == 0:
        return float(out)
    return out


def derivative_sup(fn, orders=(1, 2, 3), samples: int = 2001) -> float:
    """``max_[0,1] sum_i |f^(i)|^2`` on a uniform sample."""
    xs = np.linspace(0.0, 1.0, samples)
    total = np.zeros_like(xs)
    for k in orders:
        total += fd_derivative(fn, xs, k, lo=0.0, hi=1.0) ** 2
    return float(np.max(total))


def forcing_ratio(spec: ProblemSpec, data: InitialData, t: float, m: int = 4000) -> float:
    """``int_0^1 G^2 dx / max sum_i |f^(i)|^2``, the empirical constant of the G bound."""
    x = np.linspace(0.0, 1.0, m + 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KinkWarning)
        G = forcing_G(spec, data, x, t)
    denom = derivative_sup(LayerProfile.build(spec, data).f)
    return float(trapezoid(G**2, x)) / denom if denom > 0 else 0.0


corrector_layer = corrector
