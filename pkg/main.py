#!/usr/bin/env python3
"""
Walk through the closed-laboratory experiment with the friendrun API.
"""

import math
import time

from dotenv import load_dotenv

from friendrun.analysis import coherence_witness
from friendrun.config import get_config_manager
from friendrun.dynamics import CollapseAt, UnitaryOnly, distinguishing_power, run_trajectories
from friendrun.protocol import build_wigner_script, evolve, run_script
from friendrun.qstate import format_state

load_dotenv()


def main():
    print("🐱 friendrun walkthrough")
    print("=" * 40)
    start_time = time.time()

    bet_config = get_config_manager().get_bet_config()
    theta = math.pi / 2
    script = build_wigner_script(theta)
    print(f"📋 {script.name}: {len(script.steps)} steps over {', '.join(script.layout.names)}")

    # the laboratory right after Bob looks at the cat
    observed = evolve(script.steps[: script.step_index("bob_observes") + 1], script.initial_state())
    print(f"🔬 After the observation: {format_state(observed)}")
    witness = coherence_witness(observed, "bob")
    print(f"   global coherence {witness.global_coherence:.4f}, Bob's own coherence {witness.reduced_coherence:.4f}")

    trace = run_script(script, UnitaryOnly())
    print(f"↩️  Unitary undo, return fidelity {trace.final_fidelity:.12f}")
    print(f"   final state {format_state(trace.final_state)}")

    n = min(bet_config.n_trajectories, 10000)
    unitary = run_trajectories(script, UnitaryOnly(), n, bet_config.master_seed)
    collapse = run_trajectories(
        script, CollapseAt(step_label="bob_observes", subsystem="bob"), n, bet_config.master_seed
    )
    power = distinguishing_power(unitary, collapse)
    print(f"🎲 Bet over {n} trajectories (seed {bet_config.master_seed})")
    print(f"   unitary: return fidelity {unitary.mean_return_fidelity:.4f}")
    print(f"   collapse: return fidelity {collapse.mean_return_fidelity:.4f} ± {collapse.return_fidelity_stderr:.4f}")
    print(f"   TV distance {power.tv_distance:.4f}, runs to settle {power.runs_to_settle}")

    print(f"⏱️  Total time: {time.time() - start_time:.2f}s")


if __name__ == "__main__":
    main()
