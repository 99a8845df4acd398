"""Exact Fourier-series solution of the damped wave problem.

Separation of variables gives the spatial modes
``X_n(x) = exp(beta_w x) sin(n pi x)`` with ``beta_w = b / (2 a^2 eps)``
and, for each ``n``, a damped oscillator in time whose characteristic
roots are ``(-1 +- s_n) / (2 eps)`` where
``s_n^2 = (1 - b^2/a^2) - 4 a^2 n^2 eps^2 pi^2``.  Modes with ``s_n^2 > 0``
are overdamped, ``s_n^2 < 0`` underdamped, and ``s_n = 0`` (only possible
when the cutoff is an integer) critical.

Every mode is expressed through two weighted sine integrals::

    F_n = int_0^1 f(x)                  exp(-beta_w x) sin(n pi x) dx
    H_n = int_0^1 (f(x)/(2 eps) - g'(x)) exp(-beta_w x) sin(n pi x) dx

and the time factor ``T_n(t) = 2 F_n C_n(t) + 2 H_n S_n(t)`` where
``C_n(0) = 1``, ``S_n(0) = 0``, ``S_n'(0) = 1``.  The classical
coefficients follow as ``c_n + d_n = 2 F_n`` and
``d_n - c_n = 4 eps H_n / s_n`` (overdamped), ``c_n = 2 F_n``,
``d_n = 2 H_n / beta_n`` (underdamped) and ``c_n = 2 F_n``, ``d_n = 2 H_n``
(critical).  Writing the time factor this way removes the ``1/s_n``
cancellation near a degenerate mode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NotApplicable, Overflow, QuadratureUnderflow
from .model import InitialData, ProblemSpec
from .numerics import GAUSS_ORDER, gauss_panels
from .scaled import ZERO, ScaledFloat

DEFAULT_N_MAX = 200
DEGEN_TOL = 1e-9
_LOG_MAX = 709.0


class Branch(enum.Enum):
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    UNDERDAMPED = "underdamped"


@dataclass(frozen=True)
class ModeData:
    n: int
    branch: Branch
    spec: ProblemSpec
    alpha_minus: Optional[float] = None
    alpha_plus: Optional[float] = None
    beta: Optional[float] = None
    F: Optional[ScaledFloat] = None
    H: Optional[ScaledFloat] = None

    @property
    def lambda_n(self) -> float:
        a, b, eps = self.spec.a, self.spec.b, self.spec.epsilon
        return -(a**2) * self.n**2 * math.pi**2 - b**2 / (4 * a**2 * eps**2)

    @property
    def has_coefficients(self) -> bool:
        return self.F is not None

    @property
    def c(self) -> ScaledFloat:
        self._require_coefficients()
        if self.branch is Branch.OVERDAMPED:
            return self.F - self._half_gap()
        return self.F * 2.0

    @property
    def d(self) -> ScaledFloat:
        self._require_coefficients()
        if self.branch is Branch.OVERDAMPED:
            return self.F + self._half_gap()
        if self.branch is Branch.CRITICAL:
            return self.H * 2.0
        return self.H * (2.0 / self.beta)

    def _half_gap(self) -> ScaledFloat:
        # (d - c) / 2 = 2 eps H / s
        s = self.spec.epsilon * (self.alpha_plus - self.alpha_minus)
        return self.H * (2 * self.spec.epsilon / s)

    def _require_coefficients(self):
        if self.F is None:
            raise ValueError(f"mode {self.n} has no coefficients; call compute_coefficients")

    def time_factors(self, t):
        """Return ``(rate, pC, pS)`` with ``C(t) = e^{rate t} pC``, ``S(t) = e^{rate t} pS``."""
        t = np.asarray(t, dtype=float)
        eps = self.spec.epsilon
        if self.branch is Branch.OVERDAMPED:
            sigma = 0.5 * (self.alpha_plus - self.alpha_minus)
            decay = np.exp(-2 * sigma * t)
            return self.alpha_plus, 0.5 * (1 + decay), -np.expm1(-2 * sigma * t) / (2 * sigma)
        if self.branch is Branch.CRITICAL:
            return -1 / (2 * eps), np.ones_like(t), t.copy()
        return -1 / (2 * eps), np.cos(self.beta * t), np.sin(self.beta * t) / self.beta


@dataclass(frozen=True)
class ModeSet:
    spec: ProblemSpec
    n_max: int
    k: int
    degenerate: bool
    modes: tuple

    def __getitem__(self, n: int) -> ModeData:
        return self.modes[n - 1]

    def __len__(self):
        return len(self.modes)

    @property
    def has_coefficients(self) -> bool:
        return all(m.has_coefficients for m in self.modes)


def cutoff_value(spec: ProblemSpec) -> float:
    """``sqrt((a^2 - b^2) / (4 eps^2 a^4 pi^2))``, the real-valued mode cutoff."""
    a, b, eps = spec.a, spec.b, spec.epsilon
    return math.sqrt(a * a - b * b) / (2 * a * a * math.pi * eps)


def _s_squared(spec: ProblemSpec, n: int) -> float:
    a, b, eps = spec.a, spec.b, spec.epsilon
    return (1 - (b / a) ** 2) - 4 * a * a * n * n * eps * eps * math.pi**2


def classify_modes(spec: ProblemSpec, n_max: int = DEFAULT_N_MAX,
                   degen_tol: float = DEGEN_TOL) -> ModeSet:
    """Assign each mode ``1..n_max`` its branch and characteristic roots.

    A mode whose ``eps^2 * Delta_2`` is within ``degen_tol`` of zero is treated
    as critical, and the cutoff ``k`` is then that mode's index.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    a, b, eps = spec.a, spec.b, spec.epsilon
    kstar = cutoff_value(spec)
    nearest = int(round(kstar))
    degenerate = nearest >= 1 and abs(_s_squared(spec, nearest)) < degen_tol
    k = nearest if degenerate else int(math.floor(kstar))

    # 1 - s^2 = b^2/a^2 + 4 a^2 n^2 eps^2 pi^2, used to keep alpha_+ accurate when s ~ 1
    modes = []
    for n in range(1, n_max + 1):
        s2 = _s_squared(spec, n)
        if degenerate and n == k:
            modes.append(ModeData(n, Branch.CRITICAL, spec))
        elif n <= k:
            s = math.sqrt(s2)
            one_minus_s2 = (b / a) ** 2 + 4 * a * a * n * n * eps * eps * math.pi**2
            alpha_plus = -one_minus_s2 / ((1 + s) * 2 * eps)
            alpha_minus = -(1 + s) / (2 * eps)
            modes.append(ModeData(n, Branch.OVERDAMPED, spec, alpha_minus, alpha_plus))
        else:
            modes.append(ModeData(n, Branch.UNDERDAMPED, spec, beta=math.sqrt(-s2) / (2 * eps)))
    return ModeSet(spec, n_max, k, degenerate, tuple(modes))


def default_panels(spec: ProblemSpec, n_max: int) -> int:
    return max(4 * n_max, 4 * math.ceil(abs(spec.weight_rate)))


def _weighted_sine_integrals(spec: ProblemSpec, values: Sequence[np.ndarray],
                             n_max: int, panels: int):
    """``int h(x) exp(-beta_w x) sin(n pi x) dx`` for each ``h`` in ``values``.

    Returns ``(shift, [array over n])`` such that the integral equals
    ``array[n-1] * exp(shift)``.  The weight is applied as
    ``exp(-beta_w x - shift)``, which never exceeds one.
    """
    nodes, weights = gauss_panels(panels)
    x = nodes.ravel()
    w = weights.ravel()
    beta_w = spec.weight_rate
    shift = max(0.0, -beta_w)
    log_weight = -beta_w * x - shift
    kernel = np.exp(log_weight) * w
    n = np.arange(1, n_max + 1)[:, None]
    sines = np.sin(n * math.pi * x[None, :])
    return shift, [sines @ (h * kernel) for h in values]


def compute_coefficients(spec: ProblemSpec, data: InitialData, mode_set: ModeSet,
                         quad_panels: Optional[int] = None) -> ModeSet:
    """Fill ``F_n``, ``H_n`` (and hence ``c_n``, ``d_n``) for every mode."""
    n_max = mode_set.n_max
    panels = quad_panels or default_panels(spec, n_max)
    if panels < 4 * n_max:
        raise ValueError(f"quad_panels must be >= 4*n_max = {4 * n_max}")
    nodes, _ = gauss_panels(panels)
    x = nodes.ravel()
    fx = np.asarray(data.f(x), dtype=float) * np.ones_like(x)
    gx = np.asarray(data.gprime(x), dtype=float) * np.ones_like(x)
    hx = fx / (2 * spec.epsilon) - gx
    shift, (F, H) = _weighted_sine_integrals(spec, [fx, hx], n_max, panels)
    if (np.any(fx != 0) or np.any(hx != 0)) and np.all(F == 0) and np.all(H == 0):
        raise QuadratureUnderflow("weighted integrals underflowed for every mode")
    modes = []
    for mode, Fn, Hn in zip(mode_set.modes, F, H):
        modes.append(
            ModeData(mode.n, mode.branch, mode.spec, mode.alpha_minus, mode.alpha_plus,
                     mode.beta, ScaledFloat.from_float(Fn, shift),
                     ScaledFloat.from_float(Hn, shift))
        )
    return ModeSet(spec, n_max, mode_set.k, mode_set.degenerate, tuple(modes))


@dataclass
class SpectralSolution:
    """Truncated series solution; evaluation is vectorised over ``x``.

    With ``b < 0`` the weight ``exp(-beta_w x)`` grows across the interval and
    the series terms cancel catastrophically away from ``x = 1``.  Since the
    problem is invariant under ``x -> 1 - x, b -> -b``, :func:`evaluate_u`
    sums the reflected series instead (``reflect=True``, the default);
    :func:`amplitude` always uses the unreflected modes.
    """

    mode_set: ModeSet
    data: InitialData
    reflect: bool = True
    _reflected: Optional["SpectralSolution"] = field(default=None, repr=False)

    @property
    def spec(self) -> ProblemSpec:
        return self.mode_set.spec

    def _arrays(self):
        """Common exponent plus plain-float ``F_n``, ``H_n`` relative to it."""
        cached = getattr(self, "_cache", None)
        if cached is None:
            values = [v for m in self.mode_set.modes for v in (m.F, m.H) if not v.is_zero()]
            ref = max((v.exponent for v in values), default=0)
            F = np.array([m.F.mantissa * math.exp(m.F.exponent - ref) for m in self.mode_set.modes])
            H = np.array([m.H.mantissa * math.exp(m.H.exponent - ref) for m in self.mode_set.modes])
            cached = self._cache = (float(ref), F, H)
        return cached

    def reflected(self) -> "SpectralSolution":
        if self._reflected is None:
            spec = ProblemSpec(self.spec.a, -self.spec.b, self.spec.epsilon)
            self._reflected = solve_spectral(spec, self.data.mirrored(), self.mode_set.n_max,
                                             reflect=False)
        return self._reflected


def solve_spectral(spec: ProblemSpec, data: InitialData, n_max: int = DEFAULT_N_MAX,
                   quad_panels: Optional[int] = None, degen_tol: float = DEGEN_TOL,
                   reflect: bool = True) -> SpectralSolution:
    modes = classify_modes(spec, n_max, degen_tol)
    return SpectralSolution(compute_coefficients(spec, data, modes, quad_panels), data, reflect)


def _mode_terms(sol: SpectralSolution, x: np.ndarray, t: float, n_idx: np.ndarray):
    """Matrix ``A_n(x, t)`` for the requested mode indices (rows) and points."""
    shift, F, H = sol._arrays()
    beta_w = sol.spec.weight_rate
    rows = []
    for i in n_idx:
        mode = sol.mode_set.modes[i]
        rate, pc, ps = mode.time_factors(t)
        bracket = 2 * F[i] * float(pc) + 2 * H[i] * float(ps)
        log_scale = shift + beta_w * x + rate * t
        if bracket == 0:
            rows.append(np.zeros_like(x))
            continue
        total = log_scale + math.log(abs(bracket))
        if np.any(total > _LOG_MAX):
            raise Overflow(f"mode {mode.n} amplitude exceeds double range at t={t}")
        rows.append(math.copysign(1.0, bracket) * np.exp(total))
    return np.array(rows)


def evaluate_u(sol: SpectralSolution, x, t: float):
    """Sum of the truncated series at points ``x`` and time ``t >= 0``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if sol.reflect and sol.spec.b < 0:
        out = evaluate_u(sol.reflected(), 1.0 - x_arr, t)
    else:
        n_idx = np.arange(sol.mode_set.n_max)
        amps = _mode_terms(sol, x_arr, t, n_idx)
        sines = np.sin((n_idx + 1)[:, None] * math.pi * x_arr[None, :])
        out = np.sum(amps * sines, axis=0)
        # sin(n pi x) vanishes at the walls; avoid leaving round-off there
        out[(x_arr == 0.0) | (x_arr == 1.0)] = 0.0
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def evaluate_u_grid(sol: SpectralSolution, x, times) -> np.ndarray:
    """``u`` on the tensor grid ``times x x`` (one row per time)."""
    return np.array([evaluate_u(sol, x, float(t)) for t in times])


def amplitude(sol: SpectralSolution, n: int, x, t: float):
    """``A_n(x, t) = exp(beta_w x) T_n(t)``, the envelope of mode ``n``."""
    if not 1 <= n <= sol.mode_set.n_max:
        raise ValueError(f"mode {n} outside 1..{sol.mode_set.n_max}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = _mode_terms(sol, x_arr, t, np.array([n - 1]))[0]
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def log_abs_amplitude_minus_weight(sol: SpectralSolution, n: int, t: float) -> float:
    """``log|A_n(x, t)| - beta_w x``, which does not depend on ``x``."""
    shift, F, H = sol._arrays()
    mode = sol.mode_set[n]
    rate, pc, ps = mode.time_factors(t)
    bracket = 2 * F[n - 1] * float(pc) + 2 * H[n - 1] * float(ps)
    if bracket == 0:
        return -math.inf
    return shift + rate * t + math.log(abs(bracket))


def weighted_inner(spec: ProblemSpec, n: int, m: int, panels: int = 400) -> float:
    """``int exp(-b x/(a^2 eps)) X_n X_m dx`` with the exponentials folded in log space."""
    nodes, weights = gauss_panels(panels)
    x = nodes.ravel()
    beta_w = spec.weight_rate
    # weight exponent plus the two mode prefactors
    log_factor = -2 * beta_w * x + beta_w * x + beta_w * x
    vals = np.exp(log_factor) * np.sin(n * math.pi * x) * np.sin(m * math.pi * x)
    return float(np.sum(vals * weights.ravel()))


def sine_coefficient(fn, n: int, panels: int = 400) -> float:
    """``2 int_0^1 fn(x) sin(n pi x) dx``."""
    nodes, weights = gauss_panels(panels)
    x = nodes.ravel()
    return float(2 * np.sum(np.asarray(fn(x)) * np.sin(n * math.pi * x) * weights.ravel()))


# -- amplitude bound checks ---------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    family: str
    n: int
    m: int
    epsilon: float
    k: int
    ratio: float


def _bound_log(spec: ProblemSpec, family: str, n: int, m: int, t: float) -> float:
    """``log(bound) - beta_w x`` for one of the three amplitude-bound families."""
    a, b, eps = spec.a, spec.b, spec.epsilon
    if family == "C":
        return 0.5 * math.log(eps / m) - t / (2 * eps)
    s2 = _s_squared(spec, n)
    s = math.sqrt(max(s2, 0.0))
    # beta_w * (a^2 / b) = 1 / (2 eps)
    time_part = -(1 - s) * t / (2 * eps)
    if family == "A":
        return math.log(eps) + time_part
    return 0.5 * math.log(eps / m) + time_part


def bound_family(k: int, n: int, m: int) -> str:
    if n == 1:
        return "A"
    if m >= 1 and n == k - m:
        return "B"
    if m >= 1 and n == k + m:
        return "C"
    raise NotApplicable(f"mode {n} matches no bound family for k={k}, m={m}")


def check_bound_thm22(spec: ProblemSpec, data: InitialData, n: int, m: int,
                      sample: Sequence[tuple], n_max: Optional[int] = None) -> BoundCheck:
    """Empirical constant ``max |A_n| / bound`` over ``(x, t)`` samples.

    The bound family follows from ``n``: ``n = 1`` uses the ``eps`` bound,
    ``n = k - m`` and ``n = k + m`` the ``sqrt(eps / m)`` bounds.  The
    exponential factor ``exp(beta_w x)`` is common to ``|A_n|`` and the bound
    and cancels; for ``b < 0`` the problem is reflected first.
    """
    if spec.b == 0:
        raise NotApplicable("amplitude bounds need b != 0")
    if spec.b < 0:
        spec = ProblemSpec(spec.a, -spec.b, spec.epsilon)
        data = data.mirrored()
        sample = [(1.0 - x, t) for x, t in sample]
    modes = classify_modes(spec, n_max or max(n, 1))
    family = bound_family(modes.k, n, m)
    sol = solve_spectral(spec, data, max(n_max or 0, n), reflect=False)
    worst = -math.inf
    for _, t in sample:
        worst = max(worst, log_abs_amplitude_minus_weight(sol, n, t) - _bound_log(spec, family, n, m, t))
    ratio = 0.0 if worst == -math.inf else math.exp(worst)
    return BoundCheck(family, n, m, spec.epsilon, modes.k, ratio)


def check_b0_mode_limit(a: float, data: InitialData, n: int, t: float,
                        eps_list: Sequence[float]) -> list[float]:
    """Deviations ``|A_n(t) - a_n|`` for ``b = 0`` along ``eps_list``.

    ``a_n = 2 int f sin(n pi x)`` is the sine coefficient of the equilibrium
    state ``u = f``; the deviation should shrink like ``O(eps)``.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    a_n = sine_coefficient(data.f, n)
    out = []
    for eps in eps_list:
        spec = ProblemSpec(a, 0.0, eps)
        modes = classify_modes(spec, n)
        if modes[n].branch is not Branch.OVERDAMPED:
            raise NotApplicable(f"mode {n} is not overdamped at eps={eps} (k={modes.k})")
        sol = solve_spectral(spec, data, n)
        out.append(abs(amplitude(sol, n, 0.5, t) - a_n))
    return out


def mode_rows(mode_set: ModeSet) -> list[dict]:
    """Rows of the modes table (``n, branch, c_mantissa, ..., beta``)."""
    rows = []
    for mode in mode_set.modes:
        c = mode.c if mode.has_coefficients else ZERO
        d = mode.d if mode.has_coefficients else ZERO
        rows.append({
            "n": mode.n,
            "branch": mode.branch.value,
            "c_mantissa": c.mantissa,
            "c_exp": c.exponent,
            "d_mantissa": d.mantissa,
            "d_exp": d.exponent,
            "alpha_minus": mode.alpha_minus,
            "alpha_plus": mode.alpha_plus,
            "beta": mode.beta,
        })
    return rows
