"""
friendrun - Simulate a friend observing inside a closed laboratory, and the undo of that observation.
"""

__version__ = "0.1.0"

# Import main classes for easier access
from friendrun.qstate import PureState, RegisterLayout
from friendrun.protocol import build_necker_script, build_wigner_script, run_script
from friendrun.dynamics import CollapseAt, UnitaryOnly, distinguishing_power, run_trajectories

# Make main components available at package level
__all__ = [
    "RegisterLayout",
    "PureState",
    "build_wigner_script",
    "build_necker_script",
    "run_script",
    "UnitaryOnly",
    "CollapseAt",
    "run_trajectories",
    "distinguishing_power",
]
