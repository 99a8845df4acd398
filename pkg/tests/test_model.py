import math

import numpy as np
import pytest

from relaxwave.errors import NonpositiveParameter, SubcharacteristicViolation
from relaxwave.model import FieldSnapshot, Grid, InitialData, ProblemSpec, check_compatibility


@pytest.mark.parametrize("a, b, eps", [(2, 1, 0.01), (1, 0, 0.1), (1, -0.999, 1e-6)])
def test_valid_specs(a, b, eps):
    spec = ProblemSpec(a, b, eps)
    assert spec.weight_rate == pytest.approx(b / (2 * a * a * eps))


@pytest.mark.parametrize("a, b", [(1, 1), (1, -1), (2, 3)])
def test_subcharacteristic(a, b):
    with pytest.raises(SubcharacteristicViolation):
        ProblemSpec(a, b, 0.1)


@pytest.mark.parametrize("a, eps", [(0, 0.1), (-1, 0.1), (1, 0), (1, -0.5), (1, math.nan)])
def test_nonpositive(a, eps):
    with pytest.raises(NonpositiveParameter):
        ProblemSpec(a, 0.0, eps)


def test_with_epsilon_revalidates():
    spec = ProblemSpec(1, 0.5, 0.1)
    assert spec.with_epsilon(0.2).epsilon == 0.2
    with pytest.raises(NonpositiveParameter):
        spec.with_epsilon(0.0)


@pytest.mark.parametrize("f, gp, ok", [
    ("sin(pi*x)", "-pi*sin(pi*x)", True),
    ("0", "0", True),
    ("cos(pi*x)", "0", False),
    ("x*(1-x)", "x", False),
])
def test_compatibility(f, gp, ok):
    report = check_compatibility(InitialData.from_strings(f, gp))
    assert report.ok is ok


def test_compatibility_names_failures():
    report = check_compatibility(InitialData.from_strings("cos(pi*x)", "0"))
    assert report.failures() == ["f(0)", "f(1)"]


def test_mirrored_data():
    data = InitialData.from_strings("x*(1-x)^2", "0")
    mir = data.mirrored()
    assert mir.f(0.25) == pytest.approx(data.f(0.75))


def test_callable_data():
    data = InitialData(lambda x: np.sin(np.pi * x), lambda x: 0 * x)
    assert data.f(0.5) == pytest.approx(1.0)
    assert InitialData.from_strings("0", "0").is_zero


@pytest.mark.parametrize("m", [1, 3, 400, 1000])
def test_grid_endpoints(m):
    x = Grid(m).points
    assert x[0] == 0.0 and x[-1] == 1.0
    assert len(x) == m + 1
    assert np.allclose(np.diff(x), 1 / m)


def test_snapshot_grid():
    snap = FieldSnapshot(0.0, np.zeros(11))
    assert snap.m == 10
    assert snap.x[5] == 0.5
