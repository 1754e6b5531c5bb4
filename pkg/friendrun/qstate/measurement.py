"""
Projective measurement in the computational basis of one register.
"""

from typing import Tuple

import numpy as np

from friendrun.config.constants import Tolerances
from friendrun.errors import MeasurementError, NumericalInvariantError
from friendrun.qstate.state import PureState, outcome_probabilities


def sample_outcome(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    """
    Draw an index with the given weights, using exactly one uniform from ``rng``.

    Only indices with strictly positive weight can be returned.
    """
    support = np.flatnonzero(probabilities > 0)
    if support.size == 0:
        raise MeasurementError("no outcome has positive probability")
    cdf = np.cumsum(probabilities[support])
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return int(support[min(k, support.size - 1)])


def measure(state: PureState, subsystem: str, rng: np.random.Generator) -> Tuple[int, float, PureState]:
    """
    Measure ``subsystem`` with Born probabilities.

    Returns:
        (outcome, probability of that outcome, renormalised post-measurement state)
    """
    probabilities = outcome_probabilities(state, subsystem)
    total = float(probabilities.sum())
    if abs(total - 1.0) > Tolerances.NORM:
        raise NumericalInvariantError(f"Born probabilities sum to {total!r}", value=total)

    outcome = sample_outcome(probabilities, rng)
    prob = float(probabilities[outcome])
    return outcome, prob, project(state, subsystem, outcome)


def project(state: PureState, subsystem: str, outcome: int) -> PureState:
    """Normalised projection of ``state`` onto ``subsystem == outcome``."""
    layout = state.layout
    axis = layout.index_of(subsystem)
    if not 0 <= outcome < layout.dims[axis]:
        raise MeasurementError(f"outcome {outcome} out of range for subsystem '{subsystem}'")
    tensor = np.zeros_like(state.as_tensor())
    index = [slice(None)] * len(layout)
    index[axis] = outcome
    tensor[tuple(index)] = state.as_tensor()[tuple(index)]
    weight = float(np.vdot(tensor, tensor).real)
    if weight <= 0.0:
        raise MeasurementError(f"outcome {outcome} of '{subsystem}' has zero probability")
    return PureState._trusted(layout, (tensor / np.sqrt(weight)).reshape(-1))
