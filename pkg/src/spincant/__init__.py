"""Simulator for a resonantly driven cantilever entangled with a remote spin.

Integrates the four coupled component equations of the cantilever + two-spin
system under cyclic adiabatic inversion drives, and measures the resulting
cat-state phenomenology: peak splitting, branch proportionality, conditional
remote-spin collapse, and the branch oscillation phase difference.
"""

__version__ = "0.1.0"

from .errors import EdgeLeakError, NonFiniteFieldError, SimulationAbort
from .grid import SpatialGrid, make_grid
from .observables import (
    BranchPhaseSeries,
    CatDecomposition,
    DecompositionUnavailableError,
    InsufficientDataError,
    Peak,
    PositionDistribution,
    RatioUndefinedError,
    SpinExpectations,
    alignment_angle,
    component_ratio,
    decompose_cat,
    find_peaks,
    position_distribution,
    spin_expectations,
    track_branch_phases,
)
from .oracle import DenseHamiltonian, assemble, oracle_evolve
from .params import PhysicalParams, SimConfig, validate_config
from .propagator import StepPlan, evolve, spin_block_step, step
from .recording import ObservableSinks, RunRecord, SampleRow
from .schedules import (
    CyclicInversionSchedule,
    DriveSchedule,
    SineToySchedule,
    effective_field,
    make_schedule,
    register_schedule,
    schedule_ids,
)
from .spinor import (
    SpinorField,
    edge_leak,
    field_norm2,
    initial_state,
    pair_masses,
    to_momentum,
    to_position,
    zero_field,
)

__all__ = [
    "__version__",
    "BranchPhaseSeries", "CatDecomposition", "CyclicInversionSchedule",
    "DecompositionUnavailableError", "DenseHamiltonian", "DriveSchedule",
    "EdgeLeakError", "InsufficientDataError", "NonFiniteFieldError",
    "ObservableSinks", "Peak", "PhysicalParams", "PositionDistribution",
    "RatioUndefinedError", "RunRecord", "SampleRow", "SimConfig",
    "SimulationAbort", "SineToySchedule", "SpatialGrid", "SpinExpectations",
    "SpinorField", "StepPlan",
    "alignment_angle", "assemble", "component_ratio", "decompose_cat",
    "edge_leak", "effective_field", "evolve", "field_norm2", "find_peaks",
    "initial_state", "make_grid", "make_schedule", "oracle_evolve",
    "pair_masses", "position_distribution", "register_schedule",
    "schedule_ids", "spin_block_step", "spin_expectations", "step",
    "to_momentum", "to_position", "track_branch_phases", "validate_config",
    "zero_field",
]
