"""
Tests for the state kernel: layouts, pure states, density matrices,
partial traces, information metrics and measurement.
"""

import math

import numpy as np
import pytest

from friendrun.dynamics import trajectory_rng
from friendrun.errors import (
    DensityMatrixError,
    LayoutError,
    MeasurementError,
    NumericalInvariantError,
    StateError,
)
from friendrun.qstate import (
    DensityMatrix,
    PureState,
    RegisterLayout,
    apply_gate,
    binary_entropy,
    expectation_projector,
    fidelity,
    format_state,
    make_basis_state,
    measure,
    outcome_probabilities,
    partial_trace,
    project,
    purity,
    ry_gate,
    sample_outcome,
    trace_distance,
    von_neumann_entropy,
)

from reference import brute_partial_trace, entropy_bits, random_amplitudes

SQRT_HALF = 1 / math.sqrt(2)


@pytest.fixture
def bell():
    layout = RegisterLayout.qubits("a", "b")
    return PureState(layout, [SQRT_HALF, 0, 0, SQRT_HALF])


@pytest.fixture
def mixed_layout():
    return RegisterLayout((("a", 2), ("q", 3), ("b", 2), ("c", 2)))


# ═══════════════════════════════════════════════════════════════
# Layouts
# ═══════════════════════════════════════════════════════════════

class TestRegisterLayout:
    """Row-major indexing over named registers."""

    def test_first_register_is_most_significant(self):
        layout = RegisterLayout.qubits("a", "b", "c")
        assert layout.to_index({"a": 1, "b": 0, "c": 1}) == 5
        assert layout.to_index((0, 1, 1)) == 3
        assert layout.to_multi_index(6) == (1, 1, 0)

    def test_mixed_dimensions(self, mixed_layout):
        assert mixed_layout.total_dim == 24
        assert mixed_layout.to_index((1, 2, 1, 0)) == 1 * 12 + 2 * 4 + 1 * 2 + 0
        assert mixed_layout.label(23) == "a=1,q=2,b=1,c=1"

    def test_duplicate_names_rejected(self):
        with pytest.raises(LayoutError):
            RegisterLayout.qubits("a", "a")

    def test_dimension_below_two_rejected(self):
        with pytest.raises(LayoutError):
            RegisterLayout((("a", 1),))

    def test_empty_layout_rejected(self):
        with pytest.raises(LayoutError):
            RegisterLayout(())

    def test_unknown_and_missing_registers(self):
        layout = RegisterLayout.qubits("a", "b")
        with pytest.raises(LayoutError):
            layout.index_of("z")
        with pytest.raises(LayoutError):
            layout.to_index({"a": 0})
        with pytest.raises(LayoutError):
            layout.to_index({"a": 0, "b": 0, "z": 1})

    def test_value_out_of_range(self):
        with pytest.raises(LayoutError):
            RegisterLayout.qubits("a").to_index({"a": 2})

    def test_subset_keeps_layout_order(self, mixed_layout):
        assert mixed_layout.subset(["c", "a"]).names == ("a", "c")


# ═══════════════════════════════════════════════════════════════
# Pure states and density matrices
# ═══════════════════════════════════════════════════════════════

class TestPureState:
    """Construction and validation of amplitude vectors."""

    def test_unnormalised_rejected(self):
        layout = RegisterLayout.qubits("a")
        with pytest.raises(StateError):
            PureState(layout, [1, 1])

    def test_from_amplitudes_normalises(self):
        layout = RegisterLayout.qubits("a")
        state = PureState.from_amplitudes(layout, [1, 1], normalize=True)
        np.testing.assert_allclose(state.amplitudes, [SQRT_HALF, SQRT_HALF], atol=1e-15)

    def test_wrong_length_rejected(self):
        with pytest.raises(StateError):
            PureState(RegisterLayout.qubits("a", "b"), [1, 0])

    def test_amplitudes_are_read_only(self, bell):
        with pytest.raises(ValueError):
            bell.amplitudes[0] = 0

    def test_basis_state(self):
        layout = RegisterLayout.qubits("a", "b")
        state = make_basis_state(layout, {"a": 1, "b": 0})
        np.testing.assert_allclose(state.amplitudes, [0, 0, 1, 0])

    def test_format_state(self, bell):
        assert format_state(bell) == "0.7071|a=0,b=0> + 0.7071|a=1,b=1>"
        assert format_state(make_basis_state(bell.layout, (1, 0))) == "1.0000|a=1,b=0>"


class TestDensityMatrix:
    """Hermiticity, trace and positivity checks."""

    def test_non_hermitian_rejected(self):
        with pytest.raises(DensityMatrixError):
            DensityMatrix(RegisterLayout.qubits("a"), [[0.5, 0.5], [0.0, 0.5]])

    def test_wrong_trace_rejected(self):
        with pytest.raises(DensityMatrixError):
            DensityMatrix(RegisterLayout.qubits("a"), np.eye(2))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(DensityMatrixError):
            DensityMatrix(RegisterLayout.qubits("a"), np.diag([1.5, -0.5]))

    def test_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed(RegisterLayout.qubits("a", "b"))
        np.testing.assert_allclose(rho.eigenvalues, [0.25] * 4, atol=1e-15)


class TestPartialTrace:
    """Reduced states against an index-by-index reference."""

    def test_bell_reduces_to_maximally_mixed(self, bell):
        rho = partial_trace(bell, ["a"])
        np.testing.assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)

    @pytest.mark.parametrize("keep", [["a"], ["q"], ["c", "a"], ["q", "b"], ["a", "q", "c"]])
    def test_matches_reference(self, mixed_layout, keep):
        amplitudes = random_amplitudes(mixed_layout.total_dim, np.random.default_rng(7))
        state = PureState(mixed_layout, amplitudes)
        rho = partial_trace(state, keep)
        np.testing.assert_allclose(rho.matrix, brute_partial_trace(amplitudes, mixed_layout, keep), atol=1e-12)

    def test_density_matrix_input_agrees_with_pure_input(self, mixed_layout):
        state = PureState(mixed_layout, random_amplitudes(mixed_layout.total_dim, np.random.default_rng(11)))
        from_pure = partial_trace(state, ["q", "c"])
        from_rho = partial_trace(state.density_matrix(), ["q", "c"])
        np.testing.assert_allclose(from_rho.matrix, from_pure.matrix, atol=1e-12)

    def test_kept_order_follows_layout(self, mixed_layout):
        state = make_basis_state(mixed_layout, (1, 0, 0, 0))
        rho = partial_trace(state, ["c", "a"])
        assert rho.layout.names == ("a", "c")
        assert rho.matrix[2, 2] == pytest.approx(1.0)

    def test_empty_keep_rejected(self, bell):
        with pytest.raises(LayoutError):
            partial_trace(bell, [])


# ═══════════════════════════════════════════════════════════════
# Metrics
# ═══════════════════════════════════════════════════════════════

class TestMetrics:
    """Entropy, purity, fidelity and trace distance."""

    def test_binary_entropy_values(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)
        assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-9)

    def test_binary_entropy_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            binary_entropy(1.5)

    def test_entropy_of_bell_half(self, bell):
        assert von_neumann_entropy(partial_trace(bell, ["b"])) == pytest.approx(1.0, abs=1e-9)

    def test_entropy_of_pure_state_is_zero(self, bell):
        assert von_neumann_entropy(bell.density_matrix()) == pytest.approx(0.0, abs=1e-9)

    def test_entropy_bounds(self):
        rho = DensityMatrix.maximally_mixed(RegisterLayout.qubits("a", "b"))
        assert von_neumann_entropy(rho) == pytest.approx(2.0, abs=1e-9)

    def test_entropy_matches_reference(self, mixed_layout):
        amplitudes = random_amplitudes(mixed_layout.total_dim, np.random.default_rng(3))
        state = PureState(mixed_layout, amplitudes)
        expected = entropy_bits(brute_partial_trace(amplitudes, mixed_layout, ["q"]))
        assert von_neumann_entropy(partial_trace(state, ["q"])) == pytest.approx(expected, abs=1e-9)

    def test_purity(self, bell):
        assert purity(bell.density_matrix()) == pytest.approx(1.0)
        assert purity(partial_trace(bell, ["a"])) == pytest.approx(0.5)

    def test_fidelity_and_projector(self, bell):
        basis = make_basis_state(bell.layout, (0, 0))
        assert fidelity(bell, basis) == pytest.approx(0.5)
        assert expectation_projector(bell, bell) == pytest.approx(1.0)

    def test_fidelity_dimension_mismatch(self, bell):
        other = make_basis_state(RegisterLayout.qubits("a"), (0,))
        with pytest.raises(StateError):
            fidelity(bell, other)

    def test_trace_distance(self):
        layout = RegisterLayout.qubits("a")
        mixed = DensityMatrix.maximally_mixed(layout)
        ground = make_basis_state(layout, (0,)).density_matrix()
        assert trace_distance(mixed, ground) == pytest.approx(0.5, abs=1e-12)
        assert trace_distance(ground, ground) == pytest.approx(0.0, abs=1e-12)


# ═══════════════════════════════════════════════════════════════
# Measurement
# ═══════════════════════════════════════════════════════════════

class TestMeasurement:
    """Born sampling and projection."""

    def test_product_state_is_unchanged(self, rng):
        layout = RegisterLayout.qubits("a", "b")
        outcome, prob, post = measure(make_basis_state(layout, (1, 0)), "a", rng)
        assert outcome == 1
        assert prob == pytest.approx(1.0)
        np.testing.assert_allclose(post.amplitudes, [0, 0, 1, 0], atol=1e-15)

    def test_outcome_probabilities(self):
        layout = RegisterLayout.qubits("a", "b")
        state = PureState(layout, [0, SQRT_HALF, 0, SQRT_HALF])
        np.testing.assert_allclose(outcome_probabilities(state, "a"), [0.5, 0.5], atol=1e-15)
        np.testing.assert_allclose(outcome_probabilities(state, "b"), [0.0, 1.0], atol=1e-15)

    def test_bell_outcomes_are_correlated(self, bell, rng):
        outcomes = []
        for _ in range(1000):
            outcome, prob, post = measure(bell, "a", rng)
            assert prob == pytest.approx(0.5)
            assert post.allclose(make_basis_state(bell.layout, (outcome, outcome)))
            outcomes.append(outcome)
        assert abs(np.mean(outcomes) - 0.5) < 0.06

    def test_decay_frequency_over_seeded_trajectories(self):
        layout = RegisterLayout.qubits("atom")
        state = apply_gate(make_basis_state(layout, (0,)), ry_gate("atom", math.pi / 3))
        n = 10_000
        decayed = sum(measure(state, "atom", trajectory_rng(2024, i))[0] for i in range(n))
        sigma = math.sqrt(0.25 * 0.75 / n)
        assert abs(decayed / n - 0.25) <= 3 * sigma

    def test_born_sum_checked(self, rng):
        layout = RegisterLayout.qubits("a")
        broken = PureState._trusted(layout, np.array([1.0, 1.0], dtype=np.complex128))
        with pytest.raises(NumericalInvariantError):
            measure(broken, "a", rng)

    def test_sample_outcome_stays_on_support(self, rng):
        probabilities = np.array([0.0, 0.5, 0.0, 0.5])
        draws = {sample_outcome(probabilities, rng) for _ in range(200)}
        assert draws == {1, 3}

    def test_sample_outcome_without_support(self, rng):
        with pytest.raises(MeasurementError):
            sample_outcome(np.zeros(3), rng)

    def test_project_onto_impossible_outcome(self):
        layout = RegisterLayout.qubits("a")
        with pytest.raises(MeasurementError):
            project(make_basis_state(layout, (0,)), "a", 1)
