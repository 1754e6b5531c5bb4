"""
friendrun code-level constants.

User-tunable runtime parameters belong to the unified config system
(unified_config.py); only fixed constants live here.
"""

from friendrun.errors import (
    DynamicsError,
    LayoutError,
    NumericalInvariantError,
    ProtocolError,
    ScenarioConfigError,
)


class Tolerances:
    """Numerical tolerances shared by every module."""

    # norms, unitarity, fidelities, traces
    NORM = 1e-10
    UNITARY = 1e-10
    HERMITIAN = 1e-10
    TRACE = 1e-10
    # smallest eigenvalue accepted for a density matrix
    PSD = 1e-10
    # entropy comparisons (eigensolve noise)
    ENTROPY = 1e-9
    # eigenvalues below this are clamped to 0 before taking logs
    EIGEN_CLAMP = 1e-12
    # branches lighter than this are dropped
    ZERO_WEIGHT = 1e-12
    # "paper is blank" precondition
    BLANK_RECORD = 1e-10


class Registers:
    """Register names of the built-in scenarios."""

    ATOM = "atom"
    POISON = "poison"
    CAT = "cat"
    BOB = "bob"
    PAPER = "paper"
    WIGNER = (ATOM, POISON, CAT, BOB, PAPER)

    PERCEPT = "percept"
    ANCILLA = "ancilla"
    NECKER = (PERCEPT, ANCILLA)


class StepLabels:
    """Step labels of the built-in scenarios."""

    PREPARE = "prepare"
    ATOM_DECAY = "atom_decay"
    POISON_RELEASE = "poison_release"
    CAT_POISONED = "cat_poisoned"
    BOB_OBSERVES = "bob_observes"
    QUERY = "paper_query"
    MESSAGE = "alice_message"
    MIDPOINT = "midpoint"
    MIXER = "mixer"
    FINAL = "final"

    FLIP = "flip"
    OBSERVE = "observe"

    UNDO_PREFIX = "undo:"


class ExitCodes:
    """CLI exit codes."""

    SUCCESS = 0
    FAILURE = 1
    CONFIGURATION = 2
    NUMERICAL = 3


# Exception groupings used in except clauses
class ExceptionConstants:
    """Exception groups for catching and classifying errors."""

    # bad user input: scenario files, flags, dynamics models that do not fit the script
    CONFIGURATION_EXCEPTIONS = (ScenarioConfigError, DynamicsError, ProtocolError, LayoutError)

    # numerical invariant violations
    NUMERICAL_EXCEPTIONS = (NumericalInvariantError, FloatingPointError)

    # file operations
    FILE_OPERATION_EXCEPTIONS = (OSError, IOError, PermissionError)

    # data parsing
    DATA_PARSING_EXCEPTIONS = (ValueError, TypeError, KeyError)
