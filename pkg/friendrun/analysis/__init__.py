"""
Branches, coherence and sweeps over protocol states.
"""

from friendrun.analysis.branches import (
    Branch,
    BranchDecomposition,
    branch_decomposition,
    dephase,
    local_indistinguishability,
)
from friendrun.analysis.sweep import SWEEP_COLUMNS, SweepRow, entropy_sweep, theta_grid
from friendrun.analysis.witness import CoherenceWitness, coherence_witness

__all__ = [
    "Branch",
    "BranchDecomposition",
    "branch_decomposition",
    "dephase",
    "local_indistinguishability",
    "CoherenceWitness",
    "coherence_witness",
    "SweepRow",
    "SWEEP_COLUMNS",
    "entropy_sweep",
    "theta_grid",
]
