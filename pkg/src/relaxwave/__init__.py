"""Solvers and diagnostics for a linear 2x2 relaxation system on the unit strip."""

__version__ = "0.1.0"

from .asymptotics import CorrectorField, LayerProfile, corrector, forcing_G, layer_c, layer_d, layer_U
from .energy import EnergyReport, norms, verify_thm31, verify_thm33
from .model import FieldSnapshot, Grid, InitialData, ProblemSpec, check_compatibility
from .reference import SchemeConfig, Trajectory, equilibrium_u, solve_system, solve_wave_fd
from .spectral import ModeSet, SpectralSolution, classify_modes, evaluate_u, solve_spectral

__all__ = [
    "CorrectorField", "EnergyReport", "FieldSnapshot", "Grid", "InitialData", "LayerProfile",
    "ModeSet", "ProblemSpec", "SchemeConfig", "SpectralSolution", "Trajectory",
    "check_compatibility", "classify_modes", "corrector", "equilibrium_u", "evaluate_u",
    "forcing_G", "layer_U", "layer_c", "layer_d", "norms", "solve_spectral", "solve_system",
    "solve_wave_fd", "verify_thm31", "verify_thm33",
]
