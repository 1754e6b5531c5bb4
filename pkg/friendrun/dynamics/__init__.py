"""
Dynamics models and Monte-Carlo trajectories.
"""

from friendrun.dynamics.collapse import collapse_step
from friendrun.dynamics.models import CollapseAt, CollapseEvent, DynamicsModel, UnitaryOnly
from friendrun.dynamics.rng import trajectory_rng
from friendrun.dynamics.trajectories import (
    BetReport,
    DistinguishingPower,
    ObservableComparison,
    TrajectoryBatchEvent,
    distinguishing_power,
    ensemble_density_matrix,
    exact_bet_report,
    run_trajectories,
)

__all__ = [
    "UnitaryOnly",
    "CollapseAt",
    "DynamicsModel",
    "CollapseEvent",
    "collapse_step",
    "trajectory_rng",
    "run_trajectories",
    "exact_bet_report",
    "ensemble_density_matrix",
    "BetReport",
    "ObservableComparison",
    "DistinguishingPower",
    "TrajectoryBatchEvent",
    "distinguishing_power",
]
