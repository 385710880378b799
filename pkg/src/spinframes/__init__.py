"""Qubit measurement averages, Bell correlations, CHSH bounds, and
proper-vs-dynamic mass for spherical matter.

Measurement outcomes are always +/-1; only their averages trace the
smooth cos(theta) curves. The same average-only theme carries over to
entangled pairs (conservation holds in expectation, not per trial) and,
on the gravity side, to the proper mass exceeding the dynamic mass by
the binding energy.
"""
__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    ProfileError,
    UndefinedConditionalError,
)
from .spin import (
    Angle,
    Outcome,
    OutcomeDistribution,
    QubitState,
    UnitVector3,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    classical_projection,
    expectation,
    prepare_state,
    projection_probabilities,
)
from .frames import (
    ComplementaryTriad,
    FrameRotation,
    SpinRotation,
    complementarity_check,
    rotate_state,
    rotate_triad,
    so3_from_su2,
    su2_from_axis_angle,
)
from .bell import (
    ALL_BELL_STATES,
    BELL_LABELS,
    BellState,
    CHSHSetting,
    EnsembleTable,
    JointDistribution,
    JointSetting,
    PHI_MINUS,
    PHI_PLUS,
    PSI_PLUS,
    SINGLET,
    SymmetryPlane,
    TSIRELSON_BOUND,
    XY_PLANE,
    ZX_PLANE,
    ZY_PLANE,
    build_exact_ensemble,
    chsh_classical_max,
    chsh_grid_max,
    chsh_quantum_max,
    chsh_scan,
    chsh_value,
    conditional_average,
    correlation,
    enumerate_classical_strategies,
    joint_distribution,
)
from .montecarlo import (
    EmpiricalCHSH,
    RNG_DISCIPLINE,
    RunStats,
    TrialRecord,
    empirical_chsh,
    sample_joint,
    sample_single,
)
from .grmass import (
    JunctionConfig,
    MassProfile,
    MassRatioResult,
    UnitsConfig,
    dust_cap_mass_ratio,
    flrw_mass_ratio,
    flrw_metric_components,
    load_profile_csv,
    proper_mass_integral,
)

__all__ = [
    "__version__",
    "Angle",
    "Outcome",
    "OutcomeDistribution",
    "QubitState",
    "UnitVector3",
    "X_AXIS",
    "Y_AXIS",
    "Z_AXIS",
    "classical_projection",
    "expectation",
    "prepare_state",
    "projection_probabilities",
    "ComplementaryTriad",
    "FrameRotation",
    "SpinRotation",
    "complementarity_check",
    "rotate_state",
    "rotate_triad",
    "so3_from_su2",
    "su2_from_axis_angle",
    "ALL_BELL_STATES",
    "BELL_LABELS",
    "BellState",
    "CHSHSetting",
    "EnsembleTable",
    "JointDistribution",
    "JointSetting",
    "PHI_MINUS",
    "PHI_PLUS",
    "PSI_PLUS",
    "SINGLET",
    "SymmetryPlane",
    "TSIRELSON_BOUND",
    "XY_PLANE",
    "ZX_PLANE",
    "ZY_PLANE",
    "build_exact_ensemble",
    "chsh_classical_max",
    "chsh_grid_max",
    "chsh_quantum_max",
    "chsh_scan",
    "chsh_value",
    "conditional_average",
    "correlation",
    "enumerate_classical_strategies",
    "joint_distribution",
    "EmpiricalCHSH",
    "RNG_DISCIPLINE",
    "RunStats",
    "TrialRecord",
    "empirical_chsh",
    "sample_joint",
    "sample_single",
    "JunctionConfig",
    "MassProfile",
    "MassRatioResult",
    "UnitsConfig",
    "dust_cap_mass_ratio",
    "flrw_mass_ratio",
    "flrw_metric_components",
    "load_profile_csv",
    "proper_mass_integral",
    "ConvergenceError",
    "DomainError",
    "ProfileError",
    "UndefinedConditionalError",
]
