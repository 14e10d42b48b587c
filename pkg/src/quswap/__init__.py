"""Exact simulation of entanglement swapping between maximally entangled qudit systems."""

__version__ = "0.1.0"

from .gbell import (
    GBellLabel,
    MultiEntangledSpec,
    bell_from_shifts,
    enumerate_basis,
    make_entangled,
    parse_label,
)
from .harness import (
    Limits,
    VerificationReport,
    mutated_predictor,
    random_particles,
    random_scenario,
    relabel,
    verify_scenario,
)
from .measurement import (
    CollapseResult,
    MeasurementSpec,
    OutcomeDistribution,
    collapse_all,
    distribution,
    project,
    sample,
)
from .predict import (
    InfeasibleOutcomeError,
    Prediction,
    SwapScenario,
    feasible_labels,
    is_feasible,
    predict_general,
    predict_pairs,
    predict_two_systems,
)
from .state import (
    DegenerateStateError,
    IncompatibleStatesError,
    ReducedDensity,
    SizeGuardError,
    StateVector,
    fidelity_up_to_phase,
    inner,
    normalize,
    reduce_to_single,
    tensor,
)
from .weyl import apply_rp, apply_rx, p_basis_state
