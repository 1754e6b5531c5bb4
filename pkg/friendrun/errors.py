"""
Exception hierarchy for friendrun.

Input errors derive from ``ValueError`` so callers that only know the
standard library still catch them; numerical invariant violations derive
from ``ArithmeticError`` and map to their own CLI exit code.
"""

from typing import Optional


class FriendRunError(Exception):
    """Base class for all friendrun errors."""


class LayoutError(FriendRunError, ValueError):
    """Unknown subsystem, duplicate name, or out-of-range basis value."""


class GateError(FriendRunError, ValueError):
    """Non-unitary matrix, bad targets, or dimension mismatch."""


class StateError(FriendRunError, ValueError):
    """Unnormalised amplitudes or layout mismatch between states."""


class DensityMatrixError(FriendRunError, ValueError):
    """Operator that is not Hermitian, not unit-trace, or not positive."""


class MeasurementError(FriendRunError, ValueError):
    """Invalid measurement request."""


class ProtocolError(FriendRunError, ValueError):
    """Malformed protocol script or violated step precondition."""


class DynamicsError(FriendRunError, ValueError):
    """Dynamics model that does not fit the script it is applied to."""


class ScenarioConfigError(FriendRunError, ValueError):
    """Invalid scenario configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class NumericalInvariantError(FriendRunError, ArithmeticError):
    """A numerical invariant (norm, trace, Born normalisation) drifted beyond tolerance."""

    def __init__(self, message: str, value: Optional[float] = None):
        self.value = value
        super().__init__(message)
