"""Test error handling and edge cases."""

import numpy as np
import pytest

from grassvol import checks, families, flags, gates, grassmann, holonomy, linalg, synthesis
from tests.test_data import TestMatrices


class TestErrorHandling:
    """Test suite for error handling and edge cases."""

    def test_non_square_matrix_rejected(self) -> None:
        """Test that square-only operations reject rectangular input."""
        with pytest.raises(linalg.NotSquareError):
            linalg.det(np.ones((2, 3)))

    def test_non_hermitian_rejected_by_eigensolver(self) -> None:
        """Test that the eigensolver refuses non-Hermitian input."""
        with pytest.raises(linalg.NotHermitianError):
            linalg.hermitian_eigen(TestMatrices.NOT_HERMITIAN)

    def test_non_hermitian_rejected_by_kernel_test(self) -> None:
        """Test that kernel membership is only defined for Hermitian input."""
        with pytest.raises(linalg.NotHermitianError):
            flags.in_kernel(TestMatrices.NOT_HERMITIAN)

    def test_non_integer_spectrum_has_no_type(self) -> None:
        """Test that spectral types need integer eigenvalues."""
        with pytest.raises(flags.NotInKernelError):
            flags.spectral_type(np.diag([0.5, 1.0]))

    def test_grassmann_point_rejects_non_projection(self) -> None:
        """Test that a non-idempotent matrix is not a Grassmann point."""
        with pytest.raises(ValueError, match="not an orthogonal projection"):
            grassmann.GrassmannPoint(n=2, k=1, p=np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_gate_wire_limit(self) -> None:
        """Test that wire counts beyond the configured limit are refused."""
        with pytest.raises(ValueError, match="exceeds"):
            gates.walsh_power(11)

    def test_cnot_rejects_equal_wires(self) -> None:
        """Test that CNOT control and target must differ."""
        with pytest.raises(ValueError, match="must differ"):
            gates.cnot(2, 1, 1)

    def test_circuit_rejects_out_of_range_wire(self) -> None:
        """Test that circuits validate their wires."""
        with pytest.raises(synthesis.CircuitError, match="outside"):
            synthesis.QuantumCircuit(t=2, gates=(synthesis.WireCnot(1, 3),))

    def test_root_of_non_unitary_rejected(self) -> None:
        """Test that roots are only taken of unitaries."""
        with pytest.raises(synthesis.CircuitError):
            synthesis.unitary_root(2 * np.eye(2), 2)

    def test_open_loop_rejected(self) -> None:
        """Test that a loop must end where it starts."""
        with pytest.raises(holonomy.OpenLoopError):
            holonomy.ParameterLoop(points=np.array([[0.0, 0.0], [1.0, 0.0]]))

    def test_loop_off_base_point_rejected(self) -> None:
        """Test that the loop must start at the family's base point."""
        spec = families.get_family("rotation")
        loop = holonomy.constant_loop([0.5, 0.0], 4)
        with pytest.raises(holonomy.OpenLoopError, match="base point"):
            holonomy.holonomy(spec.build(), spec.frame(), loop)

    def test_unknown_family(self) -> None:
        """Test that family lookup names the known families."""
        with pytest.raises(families.UnknownFamilyError, match="rotation"):
            families.get_family("spin-3")

    def test_unknown_check_id(self) -> None:
        """Test that suites reject unknown ids."""
        with pytest.raises(checks.UnknownCheckError):
            checks.run_suite(["gates.no-such-check"])

    def test_empty_selection(self) -> None:
        """Test that an empty selection is a usage error."""
        with pytest.raises(ValueError, match="empty"):
            checks.run_suite([])
