"""bathprobe: atom-cavity open-system simulator that reveals bath memory by
injecting local pulses and comparing the full model against its Markovian
reference (trace distance, concurrence, dynamical-recovery measure)."""

from ._kernels import BACKEND
from .config import ExperimentConfig, default_config
from .evolve import (
    PulseEvent,
    PulseSchedule,
    Trajectory,
    bloch_ode,
    decoupling_schedule,
    integrate,
    lindblad_rhs,
    merge_schedules,
    reduce_trajectory,
)
from .linalg import SubsystemLayout, herm_eigvals, kron, partial_trace, trace_norm
from .metrics import (
    MeasureResult,
    SearchSpec,
    atom_cavity_concurrence,
    bloch_expectations,
    concurrence,
    criterion_deviation,
    n_alpha,
    trace_distance,
)
from .model import (
    LindbladModel,
    ModelParams,
    annihilation,
    build_full_model,
    build_reduced_model,
    embed,
    pauli,
    with_ancilla,
)
from .riccati import RiccatiParams, RiccatiSolution, closed_solution, f_closed, f_ode, gamma_prime, riccati_rhs

__all__ = [
    "BACKEND",
    "ExperimentConfig",
    "LindbladModel",
    "MeasureResult",
    "ModelParams",
    "PulseEvent",
    "PulseSchedule",
    "RiccatiParams",
    "RiccatiSolution",
    "SearchSpec",
    "SubsystemLayout",
    "Trajectory",
    "annihilation",
    "atom_cavity_concurrence",
    "bloch_expectations",
    "bloch_ode",
    "build_full_model",
    "build_reduced_model",
    "closed_solution",
    "concurrence",
    "criterion_deviation",
    "decoupling_schedule",
    "default_config",
    "embed",
    "f_closed",
    "f_ode",
    "gamma_prime",
    "herm_eigvals",
    "integrate",
    "kron",
    "lindblad_rhs",
    "merge_schedules",
    "n_alpha",
    "partial_trace",
    "pauli",
    "reduce_trajectory",
    "riccati_rhs",
    "trace_distance",
    "trace_norm",
    "with_ancilla",
]
