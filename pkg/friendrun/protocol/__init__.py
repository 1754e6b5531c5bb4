"""
Experiment scripts: named steps, the two presets and the runner.
"""

from friendrun.protocol.necker import build_necker_script
from friendrun.protocol.queries import query_definite, query_which
from friendrun.protocol.runner import RunTrace, StepRecord, apply_step, evolve, run_script
from friendrun.protocol.steps import ProtocolScript, ProtocolStep, StepKind, reverse_steps
from friendrun.protocol.wigner import build_wigner_script, check_angle, expected_midstate

__all__ = [
    "StepKind",
    "ProtocolStep",
    "ProtocolScript",
    "StepRecord",
    "RunTrace",
    "build_wigner_script",
    "build_necker_script",
    "expected_midstate",
    "check_angle",
    "query_definite",
    "query_which",
    "run_script",
    "apply_step",
    "evolve",
    "reverse_steps",
]
