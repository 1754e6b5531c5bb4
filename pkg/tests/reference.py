"""
Slow, obviously-correct reference implementations used as test oracles.

Gates are expanded to full matrices element by element and partial traces
are summed index by index, independently of the tensor-reshaping kernel.
"""

import itertools

import numpy as np

from friendrun.qstate import GateSpec, RegisterLayout


def full_operator(layout: RegisterLayout, gate: GateSpec) -> np.ndarray:
    """The gate tensored with the identity on every other register, as a dense matrix."""
    axes = [layout.index_of(t) for t in gate.targets]
    target_dims = [layout.dims[a] for a in axes]
    basis = list(itertools.product(*(range(d) for d in layout.dims)))
    dim = layout.total_dim
    op = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(basis):
        for j, col in enumerate(basis):
            if any(row[a] != col[a] for a in range(len(layout)) if a not in axes):
                continue
            r = int(np.ravel_multi_index([row[a] for a in axes], target_dims))
            c = int(np.ravel_multi_index([col[a] for a in axes], target_dims))
            op[i, j] = gate.matrix[r, c]
    return op


def brute_partial_trace(amplitudes: np.ndarray, layout: RegisterLayout, keep) -> np.ndarray:
    """Reduced density matrix on ``keep`` (layout order) by explicit summation."""
    keep_axes = sorted(layout.index_of(k) for k in keep)
    trace_axes = [a for a in range(len(layout)) if a not in keep_axes]
    kept_dims = [layout.dims[a] for a in keep_axes]
    traced_dims = [layout.dims[a] for a in trace_axes]
    dk = int(np.prod(kept_dims))
    rho = np.zeros((dk, dk), dtype=np.complex128)

    def flat(kept, traced):
        digits = [0] * len(layout)
        for a, v in zip(keep_axes, kept):
            digits[a] = v
        for a, v in zip(trace_axes, traced):
            digits[a] = v
        return int(np.ravel_multi_index(digits, layout.dims))

    kept_basis = list(itertools.product(*(range(d) for d in kept_dims)))
    for traced in itertools.product(*(range(d) for d in traced_dims)):
        for i, ki in enumerate(kept_basis):
            for j, kj in enumerate(kept_basis):
                rho[i, j] += amplitudes[flat(ki, traced)] * np.conj(amplitudes[flat(kj, traced)])
    return rho


def random_amplitudes(dim: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)


def entropy_bits(rho: np.ndarray) -> float:
    eigenvalues = np.linalg.eigvalsh(rho)
    eigenvalues = eigenvalues[eigenvalues > 1e-12]
    return float(-np.sum(eigenvalues * np.log2(eigenvalues)))
