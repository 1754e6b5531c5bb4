"""
Branch decomposition, dephasing and local indistinguishability.

A branch is the normalised projection of the global state onto one pointer
basis value of a chosen register, weighted by its Born probability. No
interpretation is attached to it.
"""

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

from friendrun.config.constants import Tolerances
from friendrun.errors import StateError
from friendrun.qstate import (
    DensityMatrix,
    PureState,
    outcome_probabilities,
    partial_trace,
    project,
    trace_distance,
)


@dataclass(frozen=True)
class Branch:
    outcome: int
    weight: float
    state: PureState


@dataclass(frozen=True)
class BranchDecomposition:
    """Branches of a state relative to a pointer register, in increasing pointer value."""

    pointer_subsystem: str
    branches: Tuple[Branch, ...]

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self) -> Iterator[Branch]:
        return iter(self.branches)

    @property
    def weights(self) -> Tuple[float, ...]:
        return tuple(b.weight for b in self.branches)

    @property
    def outcomes(self) -> Tuple[int, ...]:
        return tuple(b.outcome for b in self.branches)

    def dephased(self) -> DensityMatrix:
        """sum_k w_k |b_k><b_k|, the state with all coherence between branches removed."""
        layout = self.branches[0].state.layout
        rho = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
        for branch in self.branches:
            psi = branch.state.amplitudes
            rho += branch.weight * np.outer(psi, psi.conj())
        return DensityMatrix(layout, rho / sum(self.weights))


def branch_decomposition(state: PureState, pointer: str) -> BranchDecomposition:
    """
    Split ``state`` along the basis values of ``pointer``.

    Branches whose weight does not exceed ``Tolerances.ZERO_WEIGHT`` are
    omitted; the rest are listed in increasing pointer value.

    Raises:
        LayoutError: ``pointer`` is not a register of the state
    """
    probabilities = outcome_probabilities(state, pointer)
    branches = tuple(
        Branch(outcome=k, weight=float(w), state=project(state, pointer, k))
        for k, w in enumerate(probabilities)
        if w > Tolerances.ZERO_WEIGHT
    )
    return BranchDecomposition(pointer_subsystem=pointer, branches=branches)


def dephase(state: Union[PureState, DensityMatrix], pointer: str) -> DensityMatrix:
    """
    Remove every coherence between different basis values of ``pointer``.

    Equivalent to ``sum_k P_k rho P_k`` with ``P_k`` the projector onto
    ``pointer == k``.
    """
    rho = state.density_matrix() if isinstance(state, PureState) else state
    layout = rho.layout
    axis = layout.index_of(pointer)
    dims = layout.dims
    tensor = rho.matrix.reshape(dims + dims)
    values = np.arange(dims[axis])
    keep = values[:, None] == values[None, :]
    shape = [1] * (2 * len(dims))
    shape[axis] = dims[axis]
    shape[len(dims) + axis] = dims[axis]
    dephased = tensor * keep.reshape(shape)
    return DensityMatrix(layout, dephased.reshape(rho.matrix.shape))


def local_indistinguishability(
    state_a: PureState,
    rho_b: Union[DensityMatrix, PureState],
    subsystem: Union[str, Sequence[str]],
) -> float:
    """
    Trace distance between the reduced states of ``state_a`` and ``rho_b`` on ``subsystem``.

    Zero means no experiment confined to ``subsystem`` can tell the two
    global situations apart.

    Raises:
        StateError: the two inputs live on different layouts
    """
    if state_a.layout != rho_b.layout:
        raise StateError(
            f"layout mismatch: {list(state_a.layout.names)} vs {list(rho_b.layout.names)}"
        )
    keep = [subsystem] if isinstance(subsystem, str) else list(subsystem)
    return trace_distance(partial_trace(state_a, keep), partial_trace(rho_b, keep))
