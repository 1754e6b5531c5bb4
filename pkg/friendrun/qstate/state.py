"""
Pure states, density matrices and partial traces.

Both value types are immutable: their arrays are copied on construction and
marked read-only, so a state may be shared freely between threads.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Union

import numpy as np

from friendrun.config.constants import Tolerances
from friendrun.errors import DensityMatrixError, LayoutError, StateError
from friendrun.qstate.layout import BasisValues, RegisterLayout


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised amplitude vector over a layout."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape[0] != self.layout.total_dim:
            raise StateError(
                f"expected {self.layout.total_dim} amplitudes for layout {self.layout.names}, "
                f"got {amplitudes.shape[0]}"
            )
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > Tolerances.NORM:
            raise StateError(f"state is not normalised: squared norm {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    @classmethod
    def from_amplitudes(
        cls, layout: RegisterLayout, amplitudes: Iterable[complex], normalize: bool = False
    ) -> "PureState":
        """Build a state; with ``normalize`` the vector is rescaled to unit norm first."""
        vector = np.array(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                          dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise StateError("cannot normalise the zero vector")
            vector = vector / norm
        return cls(layout, vector)

    @classmethod
    def _trusted(cls, layout: RegisterLayout, amplitudes: np.ndarray) -> "PureState":
        """Wrap amplitudes whose norm the caller has already checked."""
        state = object.__new__(cls)
        object.__setattr__(state, "layout", layout)
        object.__setattr__(state, "amplitudes", _frozen(np.ascontiguousarray(amplitudes, dtype=np.complex128)))
        return state

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per register."""
        return self.amplitudes.reshape(self.layout.dims)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def nonzero_amplitudes(self, tol: float = Tolerances.ZERO_WEIGHT) -> Dict[str, complex]:
        """Register-labelled amplitudes whose squared magnitude exceeds ``tol``."""
        indices = np.flatnonzero(np.abs(self.amplitudes) ** 2 > tol)
        return {self.layout.label(int(i)): complex(self.amplitudes[i]) for i in indices}

    def allclose(self, other: "PureState", atol: float = Tolerances.NORM) -> bool:
        return self.layout == other.layout and bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator on a layout."""

    layout: RegisterLayout
    matrix: np.ndarray
    _eigenvalues: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.complex128)
        dim = self.layout.total_dim
        if matrix.shape != (dim, dim):
            raise DensityMatrixError(f"expected a {dim}x{dim} matrix, got shape {matrix.shape}")
        if not np.allclose(matrix, matrix.conj().T, rtol=0, atol=Tolerances.HERMITIAN):
            raise DensityMatrixError("matrix is not Hermitian")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > Tolerances.TRACE:
            raise DensityMatrixError(f"trace is {trace!r}, expected 1")
        eigenvalues = np.linalg.eigvalsh(matrix)
        if eigenvalues[0] < -Tolerances.PSD:
            raise DensityMatrixError(f"matrix is not positive semidefinite: eigenvalue {eigenvalues[0]!r}")
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "_eigenvalues", _frozen(eigenvalues))

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues."""
        return self._eigenvalues

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    @classmethod
    def maximally_mixed(cls, layout: RegisterLayout) -> "DensityMatrix":
        return cls(layout, np.eye(layout.total_dim) / layout.total_dim)


def make_basis_state(layout: RegisterLayout, values: BasisValues) -> PureState:
    """Computational basis state with the given per-register values."""
    amplitudes = np.zeros(layout.total_dim, dtype=np.complex128)
    amplitudes[layout.to_index(values)] = 1.0
    return PureState._trusted(layout, amplitudes)


def outcome_probabilities(state: PureState, subsystem: str) -> np.ndarray:
    """Born probabilities of each basis value of one register."""
    axis = state.layout.index_of(subsystem)
    weights = np.abs(state.as_tensor()) ** 2
    other_axes = tuple(a for a in range(len(state.layout)) if a != axis)
    return weights.sum(axis=other_axes) if other_axes else weights


def _kept_names(layout: RegisterLayout, keep: Iterable[str]):
    wanted = list(keep)
    if not wanted:
        raise LayoutError("partial trace needs a non-empty set of kept subsystems")
    sub = layout.subset(wanted)
    return sub, list(sub.names)


def partial_trace(state_or_rho: Union[PureState, DensityMatrix], keep: Iterable[str]) -> DensityMatrix:
    """
    Reduced density matrix on ``keep``.

    Kept registers appear in the order of the original layout, whatever the
    order of ``keep``.
    """
    layout = state_or_rho.layout
    sub, kept = _kept_names(layout, keep)
    keep_axes = list(layout.axes_of(kept))
    trace_axes = [a for a in range(len(layout)) if a not in keep_axes]
    dk = sub.total_dim

    if isinstance(state_or_rho, PureState):
        psi = np.transpose(state_or_rho.as_tensor(), keep_axes + trace_axes).reshape(dk, -1)
        rho = psi @ psi.conj().T
    else:
        n = len(layout)
        dt = layout.total_dim // dk
        tensor = state_or_rho.matrix.reshape(layout.dims + layout.dims)
        perm = keep_axes + trace_axes + [n + a for a in keep_axes] + [n + a for a in trace_axes]
        tensor = np.transpose(tensor, perm).reshape(dk, dt, dk, dt)
        rho = np.einsum("ajbj->ab", tensor)

    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(sub, rho)


def format_state(state: PureState, precision: int = 4, tol: float = Tolerances.ZERO_WEIGHT) -> str:
    """Human-readable ket expansion labelled by register name."""
    terms = []
    for label, amp in state.nonzero_amplitudes(tol).items():
        if abs(amp.imag) <= 10 ** -(precision + 1):
            coeff = f"{amp.real:.{precision}f}"
        else:
            coeff = f"({amp.real:.{precision}f}{amp.imag:+.{precision}f}j)"
        terms.append(f"{coeff}|{label}>")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"

