"""
The friend-in-a-closed-laboratory experiment as a script.

Registers, in tensor order: atom, poison, cat, bob, paper. Value 0 means
not decayed / in the bottle / alive / saw alive / blank; value 1 the opposite
(for the paper, 1 is the written answer).

The entangling chain is atom -> poison -> cat -> bob, each CNOT controlled on
the previous link, so the undo order is unambiguous. The paper write and
Alice's messages are never part of the undo.

With this gate set a collapse at Bob's observation followed by the undo
always returns the cat alive; the collapse shows up as a return fidelity
below 1 and a residual atom excitation of sin^2(theta)/2. The optional
``mixer`` gate exists for experimenting with other gate sets.
"""

import math
from typing import Optional

import numpy as np

from friendrun.config.constants import Registers, StepLabels
from friendrun.errors import ProtocolError
from friendrun.protocol.steps import ProtocolScript, ProtocolStep, StepKind
from friendrun.qstate import GateSpec, PureState, RegisterLayout, cnot, format_state, ry_gate
from friendrun.utils import LoggingUtils

QUERY_VARIANTS = ("definite", "which")


def check_angle(value: float, name: str = "theta") -> float:
    """Angles of the presets must lie strictly inside (0, pi)."""
    value = float(value)
    if not math.isfinite(value) or not 0.0 < value < math.pi:
        raise ProtocolError(f"{name} must lie in (0, pi), got {value!r}")
    return value


def wigner_layout() -> RegisterLayout:
    return RegisterLayout.qubits(*Registers.WIGNER)


def expected_midstate(theta: float, query: str = "definite") -> PureState:
    """
    State of the laboratory after the query, written out by hand.

    definite: cos(theta/2)|00001> + sin(theta/2)|11111>
    which:    cos(theta/2)|00000> + sin(theta/2)|11111>
    """
    layout = wigner_layout()
    amplitudes = np.zeros(layout.total_dim, dtype=np.complex128)
    blank_paper = 1 if query == "definite" else 0
    amplitudes[layout.to_index((0, 0, 0, 0, blank_paper))] = math.cos(theta / 2)
    amplitudes[layout.to_index((1, 1, 1, 1, 1))] = math.sin(theta / 2)
    return PureState(layout, amplitudes)


def build_wigner_script(theta: float, query: str = "definite", mixer: Optional[GateSpec] = None) -> ProtocolScript:
    """
    Build the decay, poison, cat, observation, query, message and undo sequence.

    Args:
        theta: decay angle in (0, pi); the atom ends up in cos(theta/2)|0> + sin(theta/2)|1>
        query: "definite" (the paper stays a tensor factor) or "which" (the paper copies the branch)
        mixer: optional irreversible gate applied after Alice's message and before the undo

    Raises:
        ProtocolError: theta out of range or unknown query variant
    """
    theta = check_angle(theta)
    if query not in QUERY_VARIANTS:
        raise ProtocolError(f"unknown query variant '{query}', expected one of {QUERY_VARIANTS}")

    layout = wigner_layout()
    atom, poison, cat, bob, paper = Registers.WIGNER

    cascade = (
        ProtocolStep(StepLabels.ATOM_DECAY, StepKind.GATE, ry_gate(atom, theta), reversible=True),
        ProtocolStep(StepLabels.POISON_RELEASE, StepKind.GATE, cnot(atom, poison), reversible=True),
        ProtocolStep(StepLabels.CAT_POISONED, StepKind.GATE, cnot(poison, cat), reversible=True),
        ProtocolStep(StepLabels.BOB_OBSERVES, StepKind.GATE, cnot(cat, bob), reversible=True),
    )

    query_kind = StepKind.QUERY_DEFINITE if query == "definite" else StepKind.QUERY_WHICH
    midstate = expected_midstate(theta, query)
    message = (
        "Alice: the laboratory is now in the state "
        f"{format_state(midstate)}; each version of you sees one cat only."
    )

    steps = [ProtocolStep(StepLabels.PREPARE, StepKind.SNAPSHOT)]
    steps.extend(cascade)
    steps.append(ProtocolStep(StepLabels.QUERY, query_kind, (bob, paper)))
    steps.append(ProtocolStep(StepLabels.MESSAGE, StepKind.CLASSICAL_MESSAGE, message))
    steps.append(ProtocolStep(StepLabels.MIDPOINT, StepKind.SNAPSHOT))
    if mixer is not None:
        steps.append(ProtocolStep(StepLabels.MIXER, StepKind.GATE, mixer, reversible=False))
    steps.extend(step.inverse(reversible=False) for step in reversed(cascade))
    steps.append(ProtocolStep(StepLabels.FINAL, StepKind.SNAPSHOT))

    initial = {name: 0 for name in layout.names}
    target = dict(initial, paper=1) if query == "definite" else dict(initial)

    script = ProtocolScript(
        name="wigner",
        layout=layout,
        steps=tuple(steps),
        theta=theta,
        initial=initial,
        target=target,
        record=paper,
        observation=(StepLabels.BOB_OBSERVES, bob),
        readout=(atom, cat),
        checkpoints={StepLabels.MIDPOINT: midstate},
    )
    LoggingUtils.log_debug(
        "Protocol", "Built wigner script theta={theta:.6g} query={query} steps={n}",
        theta=theta, query=query, n=len(script.steps),
    )
    return script
