"""
Superposition versus mixture, measured in the pointer basis.
"""

import math

from pydantic import BaseModel

from friendrun.analysis.branches import branch_decomposition
from friendrun.config.constants import Tolerances
from friendrun.qstate import PureState, partial_trace


class CoherenceWitness(BaseModel):
    """
    Off-diagonal weight between the two heaviest branches.

    ``global_coherence`` is the trace norm of the block linking the two
    branches in the global density matrix, ``reduced_coherence`` the matching
    off-diagonal element of the pointer's reduced state.
    """

    pointer: str
    n_branches: int
    global_coherence: float
    reduced_coherence: float

    @property
    def entangled_locally_mixed(self) -> bool:
        """Coherent globally, mixed for the pointer alone."""
        return self.global_coherence > Tolerances.NORM and self.reduced_coherence <= Tolerances.NORM


def coherence_witness(state: PureState, pointer: str) -> CoherenceWitness:
    """
    Witness of entanglement-induced mixedness of ``pointer``.

    With fewer than two branches both values are 0.

    Raises:
        LayoutError: ``pointer`` is not a register of the state
    """
    decomposition = branch_decomposition(state, pointer)
    if len(decomposition) < 2:
        return CoherenceWitness(
            pointer=pointer, n_branches=len(decomposition), global_coherence=0.0, reduced_coherence=0.0
        )

    heaviest = sorted(decomposition, key=lambda b: (-b.weight, b.outcome))[:2]
    a, b = sorted(heaviest, key=lambda branch: branch.outcome)
    # |P_a psi><P_b psi| has trace norm |P_a psi| |P_b psi|
    global_coherence = math.sqrt(a.weight * b.weight)
    rho = partial_trace(state, [pointer]).matrix
    reduced_coherence = float(abs(rho[a.outcome, b.outcome]))
    return CoherenceWitness(
        pointer=pointer,
        n_branches=len(decomposition),
        global_coherence=global_coherence,
        reduced_coherence=reduced_coherence,
    )
