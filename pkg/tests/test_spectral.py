import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from relaxwave.errors import NotApplicable
from relaxwave.model import Grid, InitialData, ProblemSpec
from relaxwave.reference import SchemeConfig, solve_wave_fd
from relaxwave.spectral import (Branch, amplitude, bound_family, check_b0_mode_limit,
                                check_bound_thm22, classify_modes, evaluate_u, mode_rows,
                                solve_spectral, weighted_inner)


@pytest.mark.parametrize("a, b, eps, k", [
    (2, 1, 0.01, 6),
    (1, 0, 1 / (4 * math.pi), 2),
    (1, 0.999, 0.1, 0),
    (1, 0, 0.1, 1),
])
def test_cutoff_index(a, b, eps, k):
    assert classify_modes(ProblemSpec(a, b, eps), 10).k == k


def test_degenerate_mode_is_critical():
    ms = classify_modes(ProblemSpec(1, 0, 1 / (4 * math.pi)), 5)
    assert ms.degenerate
    assert [m.branch for m in ms.modes] == [Branch.OVERDAMPED, Branch.CRITICAL] + [
        Branch.UNDERDAMPED] * 3


def test_all_underdamped_below_first_cutoff():
    ms = classify_modes(ProblemSpec(1, 0.999, 0.1), 4)
    assert all(m.branch is Branch.UNDERDAMPED for m in ms.modes)
    assert all(m.beta > 0 for m in ms.modes)


def test_root_identities_fuzzed():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    checked = 0
    while checked < 1000:
        a = rng.uniform(0.2, 5)
        b = rng.uniform(-0.99, 0.99) * a
        eps = 10 ** rng.uniform(-4, -0.5)
        spec = ProblemSpec(a, b, eps)
        ms = classify_modes(spec, 1)
        if ms.k < 1:
            continue
        n = int(rng.integers(1, ms.k + 1))
        mode = classify_modes(spec, n)[n]
        if mode.branch is not Branch.OVERDAMPED:
            continue
        lo, hi = mode.alpha_minus, mode.alpha_plus
        assert lo < hi < 0
        assert lo + hi == pytest.approx(-1 / eps, rel=1e-12)
        assert lo * hi == pytest.approx(a * a * n * n * math.pi**2 + b * b / (4 * a * a * eps * eps),
                                        rel=1e-12)
        checked += 1
    assert time.perf_counter() - start < 1.0


def test_lambda_accessor():
    mode = classify_modes(ProblemSpec(2, 1, 0.01), 3)[3]
    assert mode.lambda_n == pytest.approx(-4 * 9 * math.pi**2 - 1 / (16 * 1e-4))


@pytest.mark.parametrize("n, m", [(1, 1), (1, 2), (7, 7), (20, 19), (20, 20), (3, 14)])
def test_weighted_orthogonality(demo_spec, n, m):
    expected = 0.5 if n == m else 0.0
    assert abs(weighted_inner(demo_spec, n, m) - expected) < 1e-10


def test_first_mode_coefficients(sine_only):
    eps = 0.1
    sol = solve_spectral(ProblemSpec(1, 0, eps), sine_only, n_max=4)
    s = math.sqrt(1 - 4 * eps**2 * math.pi**2)
    mode = sol.mode_set[1]
    assert mode.c.to_float() == pytest.approx(0.5 - 0.5 / s, abs=1e-12)
    assert mode.d.to_float() == pytest.approx(0.5 + 0.5 / s, abs=1e-12)
    assert mode.c.to_float() == pytest.approx(-0.14271, abs=1e-5)


def test_zero_data_gives_zero_coefficients(zero_data, demo_spec):
    sol = solve_spectral(demo_spec, zero_data, n_max=20)
    assert all(m.c.is_zero() and m.d.is_zero() for m in sol.mode_set.modes)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_coefficient_sum_matches_weighted_sine_integral(demo_spec, sine_data, n):
    sol = solve_spectral(demo_spec, sine_data, n_max=8)
    mode = sol.mode_set[n]
    bw = demo_spec.weight_rate
    ref = 2 * quad(lambda x: math.sin(math.pi * x) * math.exp(-bw * x) * math.sin(n * math.pi * x),
                   0, 1, limit=200, epsabs=1e-14)[0]
    assert (mode.c + mode.d).to_float() == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_walls_are_zero(demo_spec, sine_data):
    sol = solve_spectral(demo_spec, sine_data, n_max=50)
    for t in (0.0, 0.1, 1.0):
        assert evaluate_u(sol, 0.0, t) == 0.0
        assert evaluate_u(sol, 1.0, t) == 0.0


@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_single_mode_closed_form(sine_only, eps):
    sol = solve_spectral(ProblemSpec(1, 0, eps), sine_only, n_max=1)
    x = np.linspace(0, 1, 41)
    t = 0.7
    s2 = 1 - 4 * eps**2 * math.pi**2
    if s2 > 0:
        s = math.sqrt(s2)
        am, ap = -(1 + s) / (2 * eps), -(1 - s) / (2 * eps)
        c, d = 0.5 - 0.5 / s, 0.5 + 0.5 / s
        T = c * math.exp(am * t) + d * math.exp(ap * t)
    else:
        beta = math.sqrt(-s2) / (2 * eps)
        T = math.exp(-t / (2 * eps)) * (math.cos(beta * t) + math.sin(beta * t) / (2 * eps * beta))
    assert np.max(np.abs(evaluate_u(sol, x, t) - T * np.sin(np.pi * x))) < 1e-12


def test_against_wave_solver(sine_only):
    spec = ProblemSpec(1, 0, 0.1)
    sol = solve_spectral(spec, sine_only)
    traj = solve_wave_fd(spec, sine_only, SchemeConfig(Grid(800), 0.5, 1.0), [1.0])
    fd = traj.at(1.0).u[400]
    assert abs(evaluate_u(sol, 0.5, 1.0) - fd) < 5e-4


def test_amplitude_properties(sine_only):
    sol = solve_spectral(ProblemSpec(1, 0, 0.1), sine_only, n_max=3)
    assert amplitude(sol, 1, 0.3, 0.0) == pytest.approx(1.0, abs=1e-12)
    vals = amplitude(sol, 1, np.linspace(0, 1, 7), 0.4)
    assert np.ptp(vals) == 0.0


def test_zero_amplitude(zero_data, demo_spec):
    sol = solve_spectral(demo_spec, zero_data, n_max=5)
    assert amplitude(sol, 2, 0.5, 0.3) == 0.0


def test_b0_envelopes_do_not_grow(sine_data):
    sol = solve_spectral(ProblemSpec(1, 0, 0.05), sine_data, n_max=12)
    times = np.linspace(0, 2, 81)
    for n in range(1, 13):
        mode = sol.mode_set[n]
        c, d = abs(mode.c.to_float()), abs(mode.d.to_float())
        if mode.branch is Branch.UNDERDAMPED:
            env = np.exp(-times / 0.1) * math.hypot(c, d)
        else:
            env = c * np.exp(mode.alpha_minus * times) + d * np.exp(mode.alpha_plus * times)
        assert np.all(np.diff(env) <= 1e-14)


def test_degenerate_continuity(sine_data):
    a, b = 1.0, 0.0
    eps_star = math.sqrt(a * a - b * b) / (2 * a * a * math.pi * 2)
    lo = solve_spectral(ProblemSpec(a, b, eps_star - 1e-9), sine_data, n_max=30)
    mid = solve_spectral(ProblemSpec(a, b, eps_star), sine_data, n_max=30)
    hi = solve_spectral(ProblemSpec(a, b, eps_star + 1e-9), sine_data, n_max=30)
    assert mid.mode_set.degenerate and not lo.mode_set.degenerate
    rng = np.random.default_rng(3)
    for x, t in rng.uniform([0, 0], [1, 2], size=(20, 2)):
        u_mid = evaluate_u(mid, x, t)
        assert abs(evaluate_u(lo, x, t) - u_mid) < 1e-6
        assert abs(evaluate_u(hi, x, t) - u_mid) < 1e-6


@pytest.mark.parametrize("k, n, m, family", [(6, 1, 1, "A"), (6, 5, 1, "B"), (6, 3, 3, "B"),
                                              (6, 8, 2, "C")])
def test_bound_family(k, n, m, family):
    assert bound_family(k, n, m) == family


def test_bound_family_not_applicable():
    with pytest.raises(NotApplicable):
        bound_family(6, 4, 1)


def test_bound_ratio_zero_data(zero_data, demo_spec):
    res = check_bound_thm22(demo_spec, zero_data, 1, 1, [(0.5, 0.2)])
    assert res.ratio == 0.0


def test_bound_ratio_finite(demo_spec, sine_data):
    sample = [(x, t) for x in (0.0, 0.5, 1.0) for t in (0.05, 0.5, 1.0)]
    res = check_bound_thm22(demo_spec, sine_data, 1, 1, sample)
    assert res.family == "A" and 0 < res.ratio < math.inf


def test_bound_mirror_for_negative_drift(sine_data):
    sample = [(0.3, 0.2), (0.7, 0.6)]
    pos = check_bound_thm22(ProblemSpec(2, 1, 0.01), sine_data, 5, 1, sample)
    neg = check_bound_thm22(ProblemSpec(2, -1, 0.01), sine_data.mirrored(), 5, 1,
                            [(1 - x, t) for x, t in sample])
    assert neg.ratio == pytest.approx(pos.ratio, rel=1e-9)


def test_upper_modes_vanish_behind_front(sine_data):
    # x - (a^2/b) t < 0: the high-mode amplitude dies as eps shrinks
    x, t = 0.2, 0.1
    vals = []
    for eps in (0.01, 0.005, 0.0025):
        spec = ProblemSpec(2, 1, eps)
        k = classify_modes(spec, 1).k
        sol = solve_spectral(spec, sine_data, n_max=k + 1)
        vals.append(abs(amplitude(sol, k + 1, x, t)))
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-3 * vals[0]


def test_b0_mode_limit(sine_only):
    dev = check_b0_mode_limit(1.0, sine_only, 1, 1.0, [0.1, 0.05, 0.025])
    ratios = [dev[1] / dev[0], dev[2] / dev[1]]
    assert dev[0] > dev[1] > dev[2]
    assert all(0.3 <= r <= 0.7 for r in ratios)


def test_b0_mode_limit_rejects_underdamped(sine_only):
    with pytest.raises(NotApplicable):
        check_b0_mode_limit(1.0, sine_only, 2, 1.0, [0.2])


def test_mode_rows_blank_fields(demo_spec, sine_data):
    rows = mode_rows(solve_spectral(demo_spec, sine_data, n_max=8).mode_set)
    assert rows[0]["beta"] is None and rows[0]["branch"] == "overdamped"
    assert rows[7]["alpha_minus"] is None and rows[7]["beta"] > 0
