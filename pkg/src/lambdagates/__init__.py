"""Pulse design and time-domain simulation of single-qubit gates in
four-level Lambda systems.

The qubit lives in two ground states driven through a shared excited
state; a second, unwanted excited state sits an energy ``eps`` above it
and picks up off-resonant amplitude from the same drives. The package
designs hyperbolic-secant two-photon pulses (uncorrected, with an exact
detuning shift, or with a derivative correction), propagates them with
or without spontaneous emission and drive cross-talk, and scores the
result against the ideal rotation.

Energies are in meV and times in 1/meV (hbar = 1).
"""

from .backend import backend_name
from .dynamics import (
    DEFAULT_HISTORY_STRIDE,
    DEFAULT_STEPS,
    ConvergenceWarning,
    PropagationError,
    PropagationResult,
    TimeGrid,
    population_history,
    propagate_lindblad,
    propagate_unitary,
)
from .metrics import (
    GateReport,
    average_gate_fidelity,
    gate_improvement,
    ideal_gate,
    ideal_phase_for_rotation,
    leakage_of,
    projected_unitarity_deviation,
    unitary_channel,
)
from .model import (
    BRIGHT,
    DARK,
    TARGET,
    UNWANTED,
    SystemParams,
    cpt_transform,
    dependent_couplings,
    h_cpt,
    h_crosstalk,
    h_drag_orders,
    h_lab_interaction,
    lindblad_generators,
    s1_generator,
)
from .numerics import (
    frobenius_deviation_from_identity,
    hermitian_expm,
    unitarity_deviation,
    wrap_angle,
)
from .pulses import (
    STRATEGIES,
    PulsePlan,
    build_pulse_plan,
    drag_detuning,
    drag_envelopes,
    drag_theta,
    exact_detuning,
    sech_envelope,
    sech_envelope_derivative,
    sech_phase,
    total_phase_dependent,
)
from .scenarios import (
    CSV_COLUMNS,
    SCENARIOS,
    SweepConfig,
    SweepResult,
    config_from_dict,
    config_to_dict,
    default_config,
    evaluate_gate,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    # numerics
    "hermitian_expm",
    "frobenius_deviation_from_identity",
    "unitarity_deviation",
    "wrap_angle",
    # pulses
    "STRATEGIES",
    "PulsePlan",
    "build_pulse_plan",
    "sech_envelope",
    "sech_envelope_derivative",
    "sech_phase",
    "total_phase_dependent",
    "exact_detuning",
    "drag_envelopes",
    "drag_theta",
    "drag_detuning",
    # model
    "DARK",
    "BRIGHT",
    "TARGET",
    "UNWANTED",
    "SystemParams",
    "dependent_couplings",
    "cpt_transform",
    "h_cpt",
    "h_lab_interaction",
    "h_crosstalk",
    "h_drag_orders",
    "s1_generator",
    "lindblad_generators",
    # dynamics
    "DEFAULT_STEPS",
    "DEFAULT_HISTORY_STRIDE",
    "TimeGrid",
    "PropagationError",
    "PropagationResult",
    "ConvergenceWarning",
    "propagate_unitary",
    "propagate_lindblad",
    "population_history",
    # metrics
    "GateReport",
    "ideal_gate",
    "ideal_phase_for_rotation",
    "unitary_channel",
    "average_gate_fidelity",
    "gate_improvement",
    "leakage_of",
    "projected_unitarity_deviation",
    # scenarios
    "CSV_COLUMNS",
    "SCENARIOS",
    "SweepConfig",
    "SweepResult",
    "config_from_dict",
    "config_to_dict",
    "default_config",
    "evaluate_gate",
    "run_scenario",
]
