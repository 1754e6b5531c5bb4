"""
Gates and gate application.

Rotation convention, used everywhere in friendrun::

    R_y(theta) = [[cos(theta/2), -sin(theta/2)],
                  [sin(theta/2),  cos(theta/2)]]
"""

from dataclasses import dataclass
from math import cos, prod, sin
from typing import Collection, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group

from friendrun.config.constants import Tolerances
from friendrun.errors import GateError, LayoutError, NumericalInvariantError
from friendrun.qstate.state import PureState

_DAGGER_SUFFIX = "_dg"


@dataclass(frozen=True, eq=False)
class GateSpec:
    """A named unitary acting on an ordered list of target registers."""

    name: str
    targets: Tuple[str, ...]
    matrix: np.ndarray
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        targets = tuple(self.targets)
        if not targets:
            raise GateError(f"gate '{self.name}' has no targets")
        if len(set(targets)) != len(targets):
            raise GateError(f"gate '{self.name}' has repeated targets {targets}")
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GateError(f"gate '{self.name}' matrix must be square, got shape {matrix.shape}")
        deviation = np.linalg.norm(matrix @ matrix.conj().T - np.eye(matrix.shape[0]))
        if deviation > Tolerances.UNITARY:
            raise GateError(f"gate '{self.name}' is not unitary (deviation {deviation:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_involution(self) -> bool:
        return bool(np.allclose(self.matrix @ self.matrix, np.eye(self.dim), rtol=0, atol=Tolerances.UNITARY))

    def _is_ry(self) -> bool:
        # the name alone is not trusted: the matrix must be R_y(params[0])
        if self.name != "ry" or len(self.targets) != 1 or len(self.params) != 1:
            return False
        c, s = cos(self.params[0] / 2), sin(self.params[0] / 2)
        return bool(np.allclose(self.matrix, [[c, -s], [s, c]], rtol=0, atol=Tolerances.UNITARY))

    def dagger(self) -> "GateSpec":
        """Inverse gate; rotations invert their angle, involutions return themselves."""
        if self._is_ry():
            return ry_gate(self.targets[0], -self.params[0])
        if self.is_involution():
            return self
        if self.name.endswith(_DAGGER_SUFFIX):
            name = self.name[: -len(_DAGGER_SUFFIX)]
        else:
            name = self.name + _DAGGER_SUFFIX
        return GateSpec(name, self.targets, self.matrix.conj().T, self.params)

    def describe(self) -> str:
        params = ", ".join(f"{p:.6g}" for p in self.params)
        head = f"{self.name}({params})" if params else self.name
        return f"{head} on {', '.join(self.targets)}"


def identity(target: str, dim: int = 2) -> GateSpec:
    return GateSpec("identity", (target,), np.eye(dim))


def x_gate(target: str) -> GateSpec:
    return GateSpec("x", (target,), np.array([[0, 1], [1, 0]]))


def ry_gate(target: str, theta: float) -> GateSpec:
    c, s = cos(theta / 2), sin(theta / 2)
    return GateSpec("ry", (target,), np.array([[c, -s], [s, c]]), (theta,))


def shift_matrix(dim: int) -> np.ndarray:
    """Cyclic increment |k> -> |k+1 mod dim>; the Pauli X for a qubit."""
    return np.roll(np.eye(dim), 1, axis=0)


def controlled_write(
    control: str,
    target: str,
    control_values: Optional[Collection[int]] = None,
    control_dim: int = 2,
    target_dim: int = 2,
    name: str = "controlled_write",
) -> GateSpec:
    """
    Increment ``target`` when ``control`` is in one of ``control_values``.

    The matrix is ``P (x) S + (1 - P) (x) 1`` with ``P`` the projector onto the
    selected control values and ``S`` the cyclic shift on the target. With
    ``control_values=None`` every basis value is selected and ``P`` is the
    identity.
    """
    values = range(control_dim) if control_values is None else sorted(set(control_values))
    projector = np.zeros((control_dim, control_dim))
    for v in values:
        if not 0 <= v < control_dim:
            raise GateError(f"control value {v} out of range for dimension {control_dim}")
        projector[v, v] = 1.0
    matrix = np.kron(projector, shift_matrix(target_dim)) + np.kron(
        np.eye(control_dim) - projector, np.eye(target_dim)
    )
    return GateSpec(name, (control, target), matrix)


def cnot(control: str, target: str) -> GateSpec:
    return controlled_write(control, target, control_values={1}, name="cnot")


def random_unitary(targets: Sequence[str], dims: Sequence[int], rng: np.random.Generator) -> GateSpec:
    """Haar-random unitary on ``targets``, drawn from ``rng``."""
    return GateSpec("random", tuple(targets), unitary_group.rvs(prod(dims), random_state=rng))


def apply_gate(state: PureState, gate: GateSpec) -> PureState:
    """
    Apply ``gate`` (tensored with the identity on the other registers).

    The target axes are moved to the front of the amplitude tensor, the block
    is multiplied by the gate matrix, and the axes are moved back.
    """
    layout = state.layout
    try:
        axes = list(layout.axes_of(gate.targets))
    except LayoutError as e:
        raise GateError(f"gate '{gate.name}': {e}") from None
    target_dims = [layout.dims[a] for a in axes]
    if prod(target_dims) != gate.dim:
        raise GateError(
            f"gate '{gate.name}' has dimension {gate.dim}, targets {gate.targets} span {prod(target_dims)}"
        )

    k = len(axes)
    front = list(range(k))
    moved = np.moveaxis(state.as_tensor(), axes, front)
    rest_shape = moved.shape[k:]
    block = moved.reshape(gate.dim, -1)
    out = (gate.matrix @ block).reshape(tuple(target_dims) + rest_shape)
    amplitudes = np.moveaxis(out, front, axes).reshape(-1)

    norm_sq = float(np.vdot(amplitudes, amplitudes).real)
    if abs(norm_sq - 1.0) > Tolerances.NORM:
        raise NumericalInvariantError(
            f"norm drifted to {norm_sq!r} after gate '{gate.name}'", value=norm_sq
        )
    return PureState._trusted(layout, amplitudes)
