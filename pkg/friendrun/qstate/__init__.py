"""
Dense state-vector and density-matrix kernel.
"""

from friendrun.qstate.gates import (
    GateSpec,
    apply_gate,
    cnot,
    controlled_write,
    identity,
    random_unitary,
    ry_gate,
    shift_matrix,
    x_gate,
)
from friendrun.qstate.layout import RegisterLayout
from friendrun.qstate.measurement import measure, project, sample_outcome
from friendrun.qstate.metrics import (
    binary_entropy,
    expectation_projector,
    fidelity,
    purity,
    trace_distance,
    von_neumann_entropy,
)
from friendrun.qstate.state import (
    DensityMatrix,
    PureState,
    format_state,
    make_basis_state,
    outcome_probabilities,
    partial_trace,
)

__all__ = [
    "RegisterLayout",
    "PureState",
    "DensityMatrix",
    "GateSpec",
    "make_basis_state",
    "apply_gate",
    "partial_trace",
    "outcome_probabilities",
    "format_state",
    "identity",
    "x_gate",
    "ry_gate",
    "cnot",
    "controlled_write",
    "shift_matrix",
    "random_unitary",
    "von_neumann_entropy",
    "binary_entropy",
    "purity",
    "fidelity",
    "trace_distance",
    "expectation_projector",
    "measure",
    "project",
    "sample_outcome",
]
