"""
Outflow boundary layer
======================

With negative drift the equilibrium profile slides left and no longer
meets the wall condition at x = 0.  The layer profiles U0 and eps U1
repair that within a strip of width O(eps); what is left over, the
corrector w, should be much smaller than the deviation u - u_e.
"""

import warnings

import numpy as np

from relaxwave import Grid, InitialData, LayerProfile, ProblemSpec, SchemeConfig, corrector, solve_system
from relaxwave.asymptotics import boundary_mismatch, layer_residuals
from relaxwave.energy import slope_estimate
from relaxwave.errors import StiffnessWarning

warnings.simplefilter("ignore", StiffnessWarning)
data = InitialData.from_strings("sin(pi*x)", "-pi*sin(pi*x)")

prof = LayerProfile.build(ProblemSpec(1.0, -0.5, 0.01), data)
r0, r1 = layer_residuals(prof, np.linspace(0, 40, 81), 0.5)
print(f"layer equation residuals: {np.max(np.abs(r0)):.1e}, {np.max(np.abs(r1)):.1e}")
print("wall / far-end mismatch at t = 0.5:", boundary_mismatch(prof, 0.5))

eps_list = (0.04, 0.02, 0.01, 0.005)
dev, corr = [], []
print("\n  eps      |u - u_e|^2   |w|^2")
for eps in eps_list:
    spec = ProblemSpec(1.0, -0.5, eps)
    traj = solve_system(spec, data, SchemeConfig(Grid(1600), 1.0, 0.5), [0.5])
    field = corrector(spec, data, traj.at(0.5), 0.5)
    dev.append(field.deviation_l2sq)
    corr.append(field.w_l2sq)
    print(f"{eps:.3f}   {dev[-1]:.3e}    {corr[-1]:.3e}")

print(f"\nslope of |u - u_e|^2 in eps: {slope_estimate(eps_list, dev):.2f}")
print(f"slope of |w|^2 in eps:       {slope_estimate(eps_list, corr):.2f}")
