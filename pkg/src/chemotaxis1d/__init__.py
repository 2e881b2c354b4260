"""One-dimensional chemotaxis simulation suite.

Two models of the same aggregation phenomenon on a no-flux interval:

- a hyperbolic damped-Euler system with chemotactic forcing, solved by a
  well-balanced finite-volume scheme with interface-upwinded sources;
- its parabolic (large-damping) limit, solved by a diffusive BGK scheme.

Both are coupled to a linear reaction-diffusion chemoattractant equation.
Closed-form stationary bump solutions (gamma = 2) and a flux probe for the
parabolic limit support quantitative verification.
"""

from .core import Grid, HydroState, ModelParams, PressureLaw, total_mass
from .harness import ExperimentConfig, RunReport, compare_models, count_bumps, mesh_refinement_study, preset, run
from .hyperbolic import DampingMode, ReconstructionKind, SchemeConfig
from .riemann import FluxKind
from .stationary import Orientation, StationaryProfile, central_bump, constant_state, half_bump

__version__ = "1.0.0"

__all__ = [
    "Grid",
    "HydroState",
    "ModelParams",
    "PressureLaw",
    "total_mass",
    "ExperimentConfig",
    "RunReport",
    "run",
    "preset",
    "count_bumps",
    "compare_models",
    "mesh_refinement_study",
    "SchemeConfig",
    "ReconstructionKind",
    "DampingMode",
    "FluxKind",
    "Orientation",
    "StationaryProfile",
    "constant_state",
    "half_bump",
    "central_bump",
    "__version__",
]
