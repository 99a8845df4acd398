import numpy as np
import pytest

from relaxwave.model import InitialData, ProblemSpec


@pytest.fixture
def sine_data():
    return InitialData.from_strings("sin(pi*x)", "-pi*sin(pi*x)")


@pytest.fixture
def sine_only():
    return InitialData.from_strings("sin(pi*x)", "0")


@pytest.fixture
def zero_data():
    return InitialData.from_strings("0", "0")


@pytest.fixture
def demo_spec():
    """Wave speed 2, drift 1, relaxation time 0.01."""
    return ProblemSpec(2.0, 1.0, 0.01)



def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
