"""Composite STIRAP simulations for three-state Lambda systems."""

from ._core import (
    CayleyKlein,
    CompositeSequence,
    IntegrationError,
    PulseKind,
    PulsePair,
    SystemParams,
    cap_phases,
    compose_sequence,
    default_delay,
    effective_two_state,
    envelope_pair,
    extract_ck,
    format_phase_table,
    hamiltonian,
    lift_to_three,
    make_pulse_pair,
    phase_imprint,
    propagate,
    propagate_train,
    propagate_two_state,
    resonant_phases,
    reverse,
    run_config,
    sequence_propagator,
    solve_phases,
    to_angles,
    transfer_infidelity,
)

__all__ = [
    "CayleyKlein",
    "CompositeSequence",
    "IntegrationError",
    "PulseKind",
    "PulsePair",
    "SystemParams",
    "cap_phases",
    "compose_sequence",
    "default_delay",
    "effective_two_state",
    "envelope_pair",
    "extract_ck",
    "format_phase_table",
    "hamiltonian",
    "lift_to_three",
    "make_pulse_pair",
    "phase_imprint",
    "propagate",
    "propagate_train",
    "propagate_two_state",
    "resonant_phases",
    "reverse",
    "run_config",
    "sequence_propagator",
    "solve_phases",
    "to_angles",
    "transfer_infidelity",
]
