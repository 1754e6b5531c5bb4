"""
Bistable perception preset.

A two-level ``percept`` register holds the two readings of an ambiguous
line drawing. Rotating it by omega*t leaves it mid-flip between the readings;
a CNOT onto an ``ancilla`` plays the role of noticing which reading is seen.
Undoing the observation and the rotation restores |0,0>. When the ancilla
record is kept, the undo of the rotation can no longer bring the readings
back together and the percept ends up dephased.
"""

from friendrun.config.constants import Registers, StepLabels
from friendrun.protocol.steps import ProtocolScript, ProtocolStep, StepKind
from friendrun.qstate import RegisterLayout, cnot, ry_gate
from friendrun.utils import LoggingUtils


def build_necker_script(omega_t: float, keep_record: bool = False) -> ProtocolScript:
    """
    Build the flip, observe and undo sequence.

    Args:
        omega_t: rotation angle of the percept; pi flips it fully to the other reading
        keep_record: leave the ancilla record in place instead of undoing the observation
    """
    omega_t = float(omega_t)
    percept, ancilla = Registers.NECKER
    layout = RegisterLayout.qubits(percept, ancilla)

    flip = ProtocolStep(StepLabels.FLIP, StepKind.GATE, ry_gate(percept, omega_t), reversible=True)
    observe = ProtocolStep(StepLabels.OBSERVE, StepKind.GATE, cnot(percept, ancilla), reversible=not keep_record)
    forward = (flip, observe)

    steps = [ProtocolStep(StepLabels.PREPARE, StepKind.SNAPSHOT), flip, observe]
    steps.extend(step.inverse(reversible=False) for step in reversed(forward) if step.reversible)
    steps.append(ProtocolStep(StepLabels.FINAL, StepKind.SNAPSHOT))

    initial = {percept: 0, ancilla: 0}
    script = ProtocolScript(
        name="necker",
        layout=layout,
        steps=tuple(steps),
        theta=omega_t,
        initial=initial,
        target=initial,
        record=ancilla,
        observation=(StepLabels.OBSERVE, ancilla),
        readout=(percept,),
    )
    LoggingUtils.log_debug(
        "Protocol", "Built necker script omega_t={omega_t:.6g} keep_record={keep}",
        omega_t=omega_t, keep=keep_record,
    )
    return script
