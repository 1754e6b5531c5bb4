"""
Entropy, record purity and return fidelity across decay angles.
"""

import math
from typing import Iterable, List

import numpy as np
from pydantic import BaseModel

from friendrun.config.constants import Registers, StepLabels
from friendrun.dynamics import UnitaryOnly
from friendrun.errors import ProtocolError
from friendrun.protocol import build_wigner_script, check_angle, run_script
from friendrun.utils import LoggingUtils, log_execution_time

SWEEP_COLUMNS = ("theta", "entropy_bob_bits", "purity_paper", "fidelity_final")


class SweepRow(BaseModel):
    theta: float
    entropy_bob_bits: float
    purity_paper: float
    fidelity_final: float


def theta_grid(theta_min: float, theta_max: float, steps: int) -> List[float]:
    """
    ``steps`` evenly spaced angles from ``theta_min`` to ``theta_max``, endpoints included.

    Raises:
        ProtocolError: unless 0 < theta_min < theta_max < pi and steps >= 2
    """
    if not 0.0 < theta_min < theta_max < math.pi:
        raise ProtocolError(f"sweep range must satisfy 0 < theta_min < theta_max < pi, got [{theta_min}, {theta_max}]")
    if steps < 2:
        raise ProtocolError(f"sweep needs at least 2 steps, got {steps}")
    return [float(t) for t in np.linspace(theta_min, theta_max, steps)]


@log_execution_time("Sweep")
def entropy_sweep(grid: Iterable[float], query: str = "definite") -> List[SweepRow]:
    """
    One unitary run of the laboratory per angle.

    Columns:
        entropy_bob_bits: entropy of Bob's memory right after his observation
        purity_paper: lowest purity of the paper over the whole run
        fidelity_final: return fidelity after the undo

    Raises:
        ProtocolError: an angle outside (0, pi)
    """
    thetas = [check_angle(theta) for theta in grid]
    model = UnitaryOnly()
    rows = []
    for theta in thetas:
        trace = run_script(build_wigner_script(theta, query=query), model)
        observed = trace.record_for(StepLabels.BOB_OBSERVES)
        rows.append(
            SweepRow(
                theta=theta,
                entropy_bob_bits=observed.entropies[Registers.BOB],
                purity_paper=min(r.record_purity for r in trace.records),
                fidelity_final=trace.final_fidelity,
            )
        )
    LoggingUtils.log_debug("Sweep", "Swept {n} angle(s)", n=len(rows))
    return rows
