"""Relative Casimir energies and forces between rigid Dirichlet obstacles,
computed from boundary-layer determinants at imaginary frequency.

Core pipeline:  geometry -> single-layer matrices (layerop) -> the spectral
function Xi(i kappa) -> frequency-integrated energy -> three independent force
routes (finite differences, stress-tensor surface integral, boundary kernel).
Closed-form 1D and partial-wave two-disc oracles live alongside for
validation.
"""

from .energy import (
    EnergyResult,
    FrequencyQuadrature,
    build_frequency_grid,
    energy_sweep,
    relative_energy,
)
from .errors import (
    CasimirError,
    GeometryError,
    NumericalBudgetError,
    NumericalError,
    ProximityError,
    SchemaError,
    ValidationFailure,
)
from .exact1d import (
    energy_exact_1d,
    force_exact_1d,
    h_rel_profile_1d,
    t00_exact_1d,
    two_intervals,
    xi_exact_1d,
)
from .geometry import (
    BoundaryDiscretization,
    ClosedCurve,
    Configuration,
    Interval,
    RigidMotion,
    apply_motion,
    config_digest,
    discretize,
    min_gap,
)
from .oracle_pw import TwoDiscSpec, energy_pw, xi_pw
from .spectral import XiCurve, xi, xi_curve, xi_symmetric
from .stressforce import (
    ForceResult,
    SurfaceContour,
    TensorField,
    force,
    force_boundary_hadamard,
    force_fd,
    force_surface,
    h_rel_diag,
    t_rel,
)

__version__ = "0.1.0"

__all__ = [
    "CasimirError",
    "GeometryError",
    "NumericalBudgetError",
    "NumericalError",
    "ProximityError",
    "SchemaError",
    "ValidationFailure",
    "BoundaryDiscretization",
    "ClosedCurve",
    "Configuration",
    "Interval",
    "RigidMotion",
    "apply_motion",
    "config_digest",
    "discretize",
    "min_gap",
    "EnergyResult",
    "FrequencyQuadrature",
    "build_frequency_grid",
    "energy_sweep",
    "relative_energy",
    "energy_exact_1d",
    "force_exact_1d",
    "h_rel_profile_1d",
    "t00_exact_1d",
    "two_intervals",
    "xi_exact_1d",
    "TwoDiscSpec",
    "energy_pw",
    "xi_pw",
    "XiCurve",
    "xi",
    "xi_curve",
    "xi_symmetric",
    "ForceResult",
    "SurfaceContour",
    "TensorField",
    "force",
    "force_boundary_hadamard",
    "force_fd",
    "force_surface",
    "h_rel_diag",
    "t_rel",
    "__version__",
]
