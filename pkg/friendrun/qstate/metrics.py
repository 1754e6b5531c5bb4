"""
Information metrics on states and density matrices.

Entropies are in bits.
"""

from math import log2

import numpy as np

from friendrun.config.constants import Tolerances
from friendrun.errors import DensityMatrixError, StateError
from friendrun.qstate.state import DensityMatrix, PureState


def binary_entropy(p: float) -> float:
    """H2(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not -Tolerances.ENTROPY <= p <= 1 + Tolerances.ENTROPY:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    return sum(-q * log2(q) for q in (p, 1.0 - p) if q > Tolerances.EIGEN_CLAMP)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum(l log2 l) over the spectrum of ``rho``; tiny eigenvalues count as zero."""
    eigenvalues = rho.eigenvalues
    if eigenvalues[0] < -Tolerances.PSD:
        raise DensityMatrixError(f"negative eigenvalue {eigenvalues[0]!r}")
    positive = eigenvalues[eigenvalues > Tolerances.EIGEN_CLAMP]
    entropy = float(-np.sum(positive * np.log2(positive)))
    return min(max(entropy, 0.0), log2(rho.dim))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def _check_layouts(a, b, what: str) -> None:
    if a.layout.dims != b.layout.dims:
        raise StateError(f"{what}: dimension mismatch {a.layout.dims} vs {b.layout.dims}")


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2."""
    _check_layouts(a, b, "fidelity")
    return min(float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2), 1.0)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of ``a - b``."""
    _check_layouts(a, b, "trace_distance")
    eigenvalues = np.linalg.eigvalsh(a.matrix - b.matrix)
    return min(float(0.5 * np.sum(np.abs(eigenvalues))), 1.0)


def expectation_projector(state: PureState, target: PureState) -> float:
    """
    Expectation of the projector |target><target| in ``state``.

    This is the statistic of a global, non-collapsing verification: an
    observer with full control of the laboratory measures the projector and
    reads 1 with certainty when the laboratory is in ``target``.
    """
    _check_layouts(state, target, "expectation_projector")
    return min(float(abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2), 1.0)
