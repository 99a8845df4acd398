"""
Empirical constants of the energy bounds
========================================

Each bound reads lhs <= C * rhs with an unspecified C.  Sweeping eps over
a dyadic range and watching lhs / rhs shows whether C stays put.
"""

import math
import warnings

import numpy as np

from relaxwave import Grid, InitialData, ProblemSpec, SchemeConfig, solve_system, verify_thm31, verify_thm33
from relaxwave.energy import spread
from relaxwave.errors import StiffnessWarning

warnings.simplefilter("ignore", StiffnessWarning)
data = InitialData.from_strings("sin(pi*x)", "-pi*sin(pi*x)")


def dense(spec, t_end, m):
    # enough snapshots to resolve the initial transient in time
    n = max(100, math.ceil(20 * t_end / spec.epsilon))
    return solve_system(spec, data, SchemeConfig(Grid(m), 1.0, t_end), np.linspace(0, t_end, n + 1))


print("no drift, w = u - f, t = 1")
consts = []
for eps in (0.1, 0.05, 0.025, 0.0125):
    lhs, rhs, c = verify_thm31(1.0, eps, data, dense(ProblemSpec(1.0, 0.0, eps), 1.0, 400)).at(1.0)
    consts.append(c)
    print(f"  eps {eps:.4f}  lhs {lhs:.3e}  C {c:.4f}")
print(f"  max/min {spread(consts):.2f}")

print("\ndrift -0.5, layer corrector, t = 0.5")
consts = []
for eps in (0.04, 0.02, 0.01, 0.005):
    spec = ProblemSpec(1.0, -0.5, eps)
    lhs, rhs, c = verify_thm33(spec, data, dense(spec, 0.5, 800)).at(0.5)
    consts.append(c)
    print(f"  eps {eps:.4f}  lhs {lhs:.3e}  C {c:.3e}")
print(f"  max/min {spread(consts):.2f}")
