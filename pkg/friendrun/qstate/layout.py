"""
Register layouts: named subsystems with local dimensions in a fixed tensor order.

Amplitude vectors are laid out row-major over the declared order, so the
first register is the most significant digit of the flat index.
"""

from dataclasses import dataclass
from math import prod
from typing import Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from friendrun.errors import LayoutError

BasisValues = Union[Mapping[str, int], Sequence[int]]


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named subsystems ``((name, dim), ...)``."""

    subsystems: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        subsystems = tuple((str(name), int(dim)) for name, dim in self.subsystems)
        if not subsystems:
            raise LayoutError("a layout needs at least one subsystem")
        names = [name for name, _ in subsystems]
        if any(not name for name in names):
            raise LayoutError("subsystem names must be non-empty")
        if len(set(names)) != len(names):
            raise LayoutError(f"subsystem names must be unique: {names}")
        for name, dim in subsystems:
            if dim < 2:
                raise LayoutError(f"subsystem '{name}' has dimension {dim}, expected >= 2")
        object.__setattr__(self, "subsystems", subsystems)

    @classmethod
    def qubits(cls, *names: str) -> "RegisterLayout":
        """Layout of two-level registers."""
        return cls(tuple((name, 2) for name in names))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.subsystems)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(dim for _, dim in self.subsystems)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def __len__(self) -> int:
        return len(self.subsystems)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"unknown subsystem '{name}'; layout has {list(self.names)}") from None

    def dim_of(self, name: str) -> int:
        return self.subsystems[self.index_of(name)][1]

    def axes_of(self, names: Iterable[str]) -> Tuple[int, ...]:
        return tuple(self.index_of(name) for name in names)

    def multi_index(self, values: BasisValues) -> Tuple[int, ...]:
        """Per-register basis values in layout order; every register must be assigned."""
        if isinstance(values, Mapping):
            unknown = [name for name in values if name not in self.names]
            if unknown:
                raise LayoutError(f"unknown subsystem(s) {unknown}; layout has {list(self.names)}")
            missing = [name for name in self.names if name not in values]
            if missing:
                raise LayoutError(f"no basis value given for subsystem(s) {missing}")
            digits = tuple(int(values[name]) for name in self.names)
        else:
            digits = tuple(int(v) for v in values)
            if len(digits) != len(self):
                raise LayoutError(f"expected {len(self)} basis values, got {len(digits)}")
        for name, dim, value in zip(self.names, self.dims, digits):
            if not 0 <= value < dim:
                raise LayoutError(f"value {value} out of range for subsystem '{name}' of dimension {dim}")
        return digits

    def to_index(self, values: BasisValues) -> int:
        """Row-major flat index of a computational basis vector."""
        return int(np.ravel_multi_index(self.multi_index(values), self.dims))

    def to_multi_index(self, index: int) -> Tuple[int, ...]:
        if not 0 <= index < self.total_dim:
            raise LayoutError(f"index {index} out of range for dimension {self.total_dim}")
        return tuple(int(v) for v in np.unravel_index(index, self.dims))

    def label(self, index: int) -> str:
        """Register-named label such as ``atom=1,cat=0`` for a flat index."""
        digits = self.to_multi_index(index)
        return ",".join(f"{name}={value}" for name, value in zip(self.names, digits))

    def subset(self, names: Iterable[str]) -> "RegisterLayout":
        """Sub-layout with the given registers, in this layout's order."""
        wanted = list(names)
        if not wanted:
            raise LayoutError("a sub-layout needs at least one subsystem")
        if len(set(wanted)) != len(wanted):
            raise LayoutError(f"duplicate subsystem names in {wanted}")
        self.axes_of(wanted)
        return RegisterLayout(tuple(pair for pair in self.subsystems if pair[0] in wanted))
