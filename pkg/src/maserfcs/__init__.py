"""Steady-state counting statistics for three-level maser heat engines.

Two engine configurations (plus matched classical equivalents) are analyzed
through full counting statistics of the cold-bath photon stream: current,
scaled variance, Fano factor, dynamical activity, and the
kinetic-uncertainty quantifier Q = I^2/(A dI), with closed forms audited
against jet-based tilted-generator numerics, a finite-difference spectral
route, and a quantum-jump Monte Carlo oracle.
"""

__version__ = "0.1.0"

from .analytic import (
    activity_closed,
    current_closed,
    decoherence_rate,
    fano_closed,
    fano_gap,
    kur_quantifier,
    limit_populations,
    power_stats,
    ratio_activity_current,
)
from .fcs import (
    FcsResult,
    assemble,
    cumulants_charpoly,
    cumulants_spectral,
    dynamical_activity,
)
from .liouvillian import (
    BasisOrdering,
    Superoperator,
    basis_for,
    build_classical,
    build_tilted,
    classical_rate,
)
from .params import (
    EngineParams,
    Frequencies,
    ModelKind,
    ValidatedParams,
    ValidationError,
    occupation_from_temperature,
    temperature_from_occupation,
    validate,
)
from .steadystate import DegenerateStateError, SteadyState, closed_form_state, solve_null
from .sweep import Histogram, SamplingSpec, SweepSpec, run_sampling, run_sweep
from .trajectory import JumpRecord, TrajectoryConfig, TrajectoryResult

__all__ = [
    "EngineParams", "Frequencies", "ModelKind", "ValidatedParams", "ValidationError",
    "validate", "occupation_from_temperature", "temperature_from_occupation",
    "BasisOrdering", "Superoperator", "basis_for", "build_tilted", "build_classical",
    "classical_rate",
    "SteadyState", "DegenerateStateError", "solve_null", "closed_form_state",
    "FcsResult", "assemble", "cumulants_charpoly", "cumulants_spectral", "dynamical_activity",
    "current_closed", "fano_closed", "activity_closed", "ratio_activity_current",
    "kur_quantifier", "fano_gap", "decoherence_rate", "limit_populations", "power_stats",
    "SweepSpec", "SamplingSpec", "Histogram", "run_sweep", "run_sampling",
    "TrajectoryConfig", "TrajectoryResult", "JumpRecord",
    "__version__",
]
