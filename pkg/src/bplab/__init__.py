"""bplab: statistical diagnosis of barren plateaus in variational circuits."""

__version__ = "0.1.0"

from .ansatz import (
    Circuit,
    RpaStructure,
    build_hea,
    build_rpa,
    build_rpa_from_structure,
    circuit_from_json,
    circuit_to_json,
    cost,
    cost_batch,
)
from .ga import GaConfig, GaResult, Individual, evolve, fitness
from .gradients import (
    GradientVector,
    finite_difference,
    full_gradient,
    gradient_batch,
    parameter_shift,
)
from .landscapes import GaussianModel, derivative, derivative_x, value
from .sim import (
    Gate,
    PauliObservable,
    StateVector,
    apply_circuit,
    apply_gate,
    expectation,
    init_zero_state,
    zz_observable,
)
from .stats import (
    BpClassification,
    ClassifierThresholds,
    DerivativeSampleSet,
    SecondDirectionRequired,
    SlopeFit,
    StatsSummary,
    classify_landscape,
    fit_log_slope,
    sample_toy_derivatives,
    sample_vqe_derivatives,
    summarize,
)

__all__ = [
    "BpClassification",
    "Circuit",
    "ClassifierThresholds",
    "DerivativeSampleSet",
    "GaConfig",
    "GaResult",
    "GaussianModel",
    "Gate",
    "GradientVector",
    "Individual",
    "PauliObservable",
    "RpaStructure",
    "SecondDirectionRequired",
    "SlopeFit",
    "StateVector",
    "StatsSummary",
    "apply_circuit",
    "apply_gate",
    "build_hea",
    "build_rpa",
    "build_rpa_from_structure",
    "circuit_from_json",
    "circuit_to_json",
    "classify_landscape",
    "cost",
    "cost_batch",
    "derivative",
    "derivative_x",
    "evolve",
    "expectation",
    "finite_difference",
    "fit_log_slope",
    "fitness",
    "full_gradient",
    "gradient_batch",
    "init_zero_state",
    "parameter_shift",
    "sample_toy_derivatives",
    "sample_vqe_derivatives",
    "summarize",
    "value",
    "zz_observable",
]
