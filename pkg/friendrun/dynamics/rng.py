"""
Per-trajectory random streams.

Trajectory ``i`` of a run seeded with ``master_seed`` draws from
``SeedSequence(master_seed, spawn_key=(i,))``. That is the same stream
``SeedSequence(master_seed).spawn(n)[i]`` would hand out, but it can be built
for any index on its own, so trajectories may run in any order or on any
worker and still see identical numbers.
"""

import numpy as np


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    if master_seed < 0 or index < 0:
        raise ValueError(f"seed and trajectory index must be non-negative, got {master_seed}, {index}")
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))
