"""
Projective collapse in the pointer basis.
"""

from typing import Tuple

import numpy as np

from friendrun.qstate import PureState, measure


def collapse_step(state: PureState, subsystem: str, rng: np.random.Generator) -> Tuple[PureState, int, float]:
    """
    Collapse ``state`` onto one pointer basis state of ``subsystem``.

    Same contract as ``qstate.measure``; only the order of the returned values
    differs: (branch state, outcome, Born probability of the outcome).
    """
    outcome, probability, branch = measure(state, subsystem, rng)
    return branch, outcome, probability
