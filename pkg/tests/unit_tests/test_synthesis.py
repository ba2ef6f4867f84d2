"""Unit tests for controlled-gate synthesis."""

import numpy as np
import pytest

from common.basemodel import CircuitPayload
from common.utils import haar_unitary
from grassvol import synthesis
from grassvol.gates import SIGMA_1, permutation_gate
from grassvol.linalg import max_norm
from tests.test_data import TestMatrices, TestTolerances


class TestParityIdentities:
    """Signed parity sums over Z_2."""

    @pytest.mark.parametrize("order", [2, 3])
    def test_exhaustive(self, order) -> None:
        """Test the identities on every bit assignment."""
        assert synthesis.mod2_identity_check(order)

    def test_signed_sum_values(self) -> None:
        """Test x + y + z - x^y - x^z - y^z + x^y^z at all ones."""
        assert synthesis.signed_parity_sum([1, 1, 1]) == 4
        assert synthesis.signed_parity_sum([1, 0, 1]) == 0

    def test_unsupported_order(self) -> None:
        """Test that only orders 2 and 3 are checked."""
        with pytest.raises(ValueError):
            synthesis.mod2_identity_check(4)

    def test_exponent_bookkeeping(self, rng) -> None:
        """Test V^x V^y V^{-(x^y)} = V^{2xy} for a random unitary."""
        assert synthesis.exponent_bookkeeping_error(haar_unitary(2, rng)) <= TestTolerances.IDENTITY


class TestUnitaryRoot:
    """Principal roots of 2x2 unitaries."""

    @pytest.mark.parametrize("degree", [2, 4])
    def test_root_power(self, rng, degree) -> None:
        """Test V^degree = U."""
        u = haar_unitary(2, rng)
        v = synthesis.unitary_root(u, degree)
        assert max_norm(np.linalg.matrix_power(v, degree) - u) <= TestTolerances.IDENTITY

    def test_root_of_minus_one_eigenvalue(self) -> None:
        """Test that sigma_1 has a square root despite the eigenvalue -1."""
        v = synthesis.unitary_root(SIGMA_1, 2)
        assert max_norm(v @ v - SIGMA_1) <= TestTolerances.IDENTITY

    def test_unsupported_degree(self) -> None:
        """Test that only square and fourth roots are provided."""
        with pytest.raises(synthesis.CircuitError, match="degree"):
            synthesis.unitary_root(np.eye(2), 3)


class TestCircuits:
    """Circuit construction and simulation."""

    def test_single_cnot(self) -> None:
        """Test that a one-gate circuit simulates to the CNOT."""
        circuit = synthesis.QuantumCircuit(t=2, gates=(synthesis.WireCnot(1, 2),))
        assert np.array_equal(synthesis.simulate(circuit).m, TestMatrices.CNOT)

    def test_first_gate_acts_first(self, rng) -> None:
        """Test that the circuit product is in temporal order."""
        u = haar_unitary(2, rng)
        first = synthesis.ControlledSingle(1, 2, u)
        second = synthesis.WireCnot(2, 1)
        circuit = synthesis.QuantumCircuit(t=2, gates=(first, second))
        expected = synthesis.embed(second, 2) @ synthesis.embed(first, 2)
        assert max_norm(synthesis.simulate(circuit).m - expected) == 0.0

    def test_then_concatenates(self) -> None:
        """Test that two CNOTs in sequence cancel."""
        single = synthesis.QuantumCircuit(t=2, gates=(synthesis.WireCnot(1, 2),))
        double = single.then(single)
        assert len(double) == 2
        assert np.array_equal(synthesis.simulate(double).m, np.eye(4))

    def test_then_requires_same_width(self) -> None:
        """Test that circuits of different widths do not compose."""
        with pytest.raises(synthesis.CircuitError):
            synthesis.QuantumCircuit(t=2).then(synthesis.QuantumCircuit(t=3))

    def test_non_unitary_operand_rejected(self) -> None:
        """Test that controlled operands are validated."""
        with pytest.raises(synthesis.CircuitError, match="operand"):
            synthesis.QuantumCircuit(t=2, gates=(synthesis.ControlledSingle(1, 2, 2 * np.eye(2)),))

    def test_payload_conversion(self, rng) -> None:
        """Test that a circuit survives its JSON payload."""
        circuit = synthesis.ccu_circuit(haar_unitary(2, rng))
        text = synthesis.circuit_to_payload(circuit).model_dump_json()
        rebuilt = synthesis.circuit_from_payload(CircuitPayload.model_validate_json(text))
        assert len(rebuilt) == len(circuit)
        assert max_norm(synthesis.simulate(rebuilt).m - synthesis.simulate(circuit).m) <= 1e-15


class TestControlledSynthesis:
    """C^2-U and C^3-U constructions."""

    def test_controlled_x_is_repeated_cnot(self) -> None:
        """Test that C^{t-1}-X is the repeated CNOT."""
        assert synthesis.controlled_x_equivalence(3) == 0.0

    def test_toffoli(self) -> None:
        """Test that C^2-sigma_1 synthesizes to the Toffoli gate."""
        report = synthesis.synthesize_ccu(SIGMA_1)
        toffoli = permutation_gate(3, TestMatrices.TOFFOLI_PERMUTATION).m
        assert max_norm(synthesis.simulate(report.circuit).m - toffoli) <= TestTolerances.CCU

    @pytest.mark.parametrize("trial", range(5))
    def test_ccu_random(self, rng, trial) -> None:
        """Test C^2-U against the direct matrix for Haar unitaries."""
        report = synthesis.synthesize_ccu(haar_unitary(2, rng))
        assert report.succeeded(TestTolerances.CCU)
        assert report.gate_count == 5

    @pytest.mark.parametrize("trial", range(5))
    def test_cccu_random(self, rng, trial) -> None:
        """Test C^3-U against the direct matrix for Haar unitaries."""
        report = synthesis.synthesize_cccu(haar_unitary(2, rng))
        assert report.succeeded(TestTolerances.CCCU)
        assert report.gate_count == 17

    def test_gate_count_table(self) -> None:
        """Test the gate counts and controlled-root counts."""
        rows = synthesis.gate_count_table(3)
        assert [(row.controls, row.count, row.controlled_roots) for row in rows] == [
            (2, 5, 3),
            (3, 17, 7),
        ]
