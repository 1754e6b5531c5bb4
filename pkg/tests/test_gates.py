"""
Tests for gate construction and application, checked against full
Kronecker-expanded matrices.
"""

import math

import numpy as np
import pytest

from friendrun.errors import GateError
from friendrun.qstate import (
    GateSpec,
    PureState,
    RegisterLayout,
    apply_gate,
    cnot,
    controlled_write,
    identity,
    make_basis_state,
    random_unitary,
    ry_gate,
    shift_matrix,
    x_gate,
)

from reference import full_operator, random_amplitudes


# ═══════════════════════════════════════════════════════════════
# Gate algebra
# ═══════════════════════════════════════════════════════════════

class TestGateAlgebra:
    """Matrices, inverses and validation."""

    def test_ry_convention(self):
        theta = 0.7
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        np.testing.assert_allclose(ry_gate("a", theta).matrix, [[c, -s], [s, c]], atol=1e-15)

    def test_ry_pi_flips(self):
        state = apply_gate(make_basis_state(RegisterLayout.qubits("a"), (0,)), ry_gate("a", math.pi))
        np.testing.assert_allclose(np.abs(state.amplitudes), [0, 1], atol=1e-15)

    def test_ry_dagger_negates_angle(self):
        gate = ry_gate("a", 1.1)
        inverse = gate.dagger()
        assert inverse.name == "ry"
        assert inverse.params == (-1.1,)
        np.testing.assert_allclose(inverse.matrix @ gate.matrix, np.eye(2), atol=1e-15)

    def test_dagger_of_gate_named_ry_with_other_matrix(self):
        hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        gate = GateSpec("ry", ("q",), np.diag([1, 1j]) @ hadamard, (0.3,))
        inverse = gate.dagger()
        np.testing.assert_allclose(inverse.matrix @ gate.matrix, np.eye(2), atol=1e-15)
        state = make_basis_state(RegisterLayout.qubits("q"), (0,))
        assert apply_gate(apply_gate(state, gate), inverse).allclose(state)

    def test_dagger_of_gate_named_ry_without_params(self):
        gate = GateSpec("ry", ("q",), ry_gate("q", 0.8).matrix)
        inverse = gate.dagger()
        np.testing.assert_allclose(inverse.matrix, ry_gate("q", -0.8).matrix, atol=1e-15)

    def test_involutions_are_their_own_inverse(self):
        for gate in (x_gate("a"), cnot("a", "b")):
            assert gate.is_involution()
            assert gate.dagger() is gate

    def test_cnot_matrix(self):
        expected = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        np.testing.assert_allclose(cnot("a", "b").matrix, expected)

    def test_qutrit_shift_dagger(self):
        gate = controlled_write("m", "r", control_dim=2, target_dim=3)
        assert not gate.is_involution()
        inverse = gate.dagger()
        assert inverse.name == "controlled_write_dg"
        assert inverse.dagger().name == "controlled_write"
        np.testing.assert_allclose(inverse.matrix @ gate.matrix, np.eye(6), atol=1e-15)

    def test_shift_matrix(self):
        np.testing.assert_allclose(shift_matrix(3) @ [1, 0, 0], [0, 1, 0])
        np.testing.assert_allclose(shift_matrix(2), [[0, 1], [1, 0]])

    def test_controlled_write_control_values(self):
        gate = controlled_write("m", "r", control_values={2}, control_dim=3, target_dim=2)
        layout = RegisterLayout((("m", 3), ("r", 2)))
        for value in range(3):
            out = apply_gate(make_basis_state(layout, (value, 0)), gate)
            expected = make_basis_state(layout, (value, 1 if value == 2 else 0))
            assert out.allclose(expected)

    def test_control_value_out_of_range(self):
        with pytest.raises(GateError):
            controlled_write("m", "r", control_values={2})

    def test_non_unitary_rejected(self):
        with pytest.raises(GateError):
            GateSpec("bad", ("a",), [[1, 1], [0, 1]])

    def test_repeated_targets_rejected(self):
        with pytest.raises(GateError):
            GateSpec("bad", ("a", "a"), np.eye(4))

    def test_random_unitary_is_seeded(self):
        first = random_unitary(("a", "q"), (2, 3), np.random.default_rng(8))
        second = random_unitary(("a", "q"), (2, 3), np.random.default_rng(8))
        assert first.dim == 6
        np.testing.assert_allclose(first.matrix, second.matrix)
        np.testing.assert_allclose(first.matrix @ first.matrix.conj().T, np.eye(6), atol=1e-12)

    def test_describe(self):
        assert ry_gate("atom", 0.5).describe() == "ry(0.5) on atom"
        assert cnot("a", "b").describe() == "cnot on a, b"


# ═══════════════════════════════════════════════════════════════
# Gate application
# ═══════════════════════════════════════════════════════════════

class TestApplyGate:
    """The reshaping kernel against dense reference operators."""

    @pytest.fixture
    def layout(self):
        return RegisterLayout((("a", 2), ("q", 3), ("b", 2), ("c", 2)))

    @pytest.mark.parametrize("targets", [("a",), ("q",), ("c",), ("c", "a"), ("q", "c"), ("b", "q"), ("c", "q", "a")])
    def test_matches_full_operator(self, layout, targets):
        rng = np.random.default_rng(21)
        dims = [layout.dim_of(t) for t in targets]
        gate = random_unitary(targets, dims, rng)
        amplitudes = random_amplitudes(layout.total_dim, rng)
        out = apply_gate(PureState(layout, amplitudes), gate)
        expected = full_operator(layout, gate) @ amplitudes
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)

    def test_random_circuit_matches_full_operator(self, layout):
        rng = np.random.default_rng(5)
        amplitudes = random_amplitudes(layout.total_dim, rng)
        state = PureState(layout, amplitudes)
        expected = amplitudes.copy()
        for _ in range(25):
            k = int(rng.integers(1, 4))
            targets = tuple(str(t) for t in rng.choice(layout.names, size=k, replace=False))
            gate = random_unitary(targets, [layout.dim_of(t) for t in targets], rng)
            state = apply_gate(state, gate)
            expected = full_operator(layout, gate) @ expected
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)
        assert state.norm_squared == pytest.approx(1.0, abs=1e-10)

    def test_identity_leaves_state(self, layout):
        state = PureState(layout, random_amplitudes(layout.total_dim, np.random.default_rng(2)))
        assert apply_gate(state, identity("q", 3)).allclose(state, atol=1e-15)

    def test_input_state_untouched(self):
        layout = RegisterLayout.qubits("a", "b")
        state = make_basis_state(layout, (1, 0))
        apply_gate(state, cnot("a", "b"))
        np.testing.assert_allclose(state.amplitudes, [0, 0, 1, 0])

    def test_unknown_target(self):
        state = make_basis_state(RegisterLayout.qubits("a"), (0,))
        with pytest.raises(GateError):
            apply_gate(state, x_gate("z"))

    def test_dimension_mismatch(self):
        layout = RegisterLayout((("a", 3),))
        with pytest.raises(GateError):
            apply_gate(make_basis_state(layout, (0,)), x_gate("a"))
