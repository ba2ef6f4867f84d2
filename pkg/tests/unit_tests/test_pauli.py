"""Unit tests for clock and shift matrices in dimension n."""

import numpy as np
import pytest

from grassvol import pauli
from tests.test_data import TestTolerances

DIMENSIONS = range(2, 9)


class TestClockShift:
    """Sigma_1 and Sigma_3 relations."""

    def test_shift_moves_basis(self) -> None:
        """Test Sigma_1 |j) = |j + 1 mod n)."""
        shift = pauli.clock_shift(4).shift
        assert shift[1, 0] == 1.0
        assert shift[0, 3] == 1.0

    def test_two_dimensions_are_pauli(self) -> None:
        """Test that n = 2 gives sigma_1 and sigma_3."""
        pair = pauli.clock_shift(2)
        assert np.array_equal(pair.shift, [[0, 1], [1, 0]])
        assert np.max(np.abs(pair.clock - np.diag([1, -1]))) <= 1e-15

    @pytest.mark.parametrize("n", DIMENSIONS)
    def test_relations(self, n) -> None:
        """Test Sigma^n = 1, adjoint powers and the twisted commutator."""
        assert pauli.clock_shift_error(n) <= TestTolerances.PAULI

    @pytest.mark.parametrize("n", DIMENSIONS)
    def test_weyl_commutation(self, n) -> None:
        """Test Sigma_3^a Sigma_1^b = sigma^{ab} Sigma_1^b Sigma_3^a."""
        assert pauli.weyl_commutation_error(n) <= TestTolerances.PAULI

    def test_dimension_one_rejected(self) -> None:
        """Test that clock and shift need n >= 2."""
        with pytest.raises(ValueError):
            pauli.clock_shift(1)


class TestRootsOfUnity:
    """Primitive roots sigma = exp(2 pi i / n)."""

    @pytest.mark.parametrize("n", DIMENSIONS)
    def test_root_sum(self, n) -> None:
        """Test 1 + sigma + ... + sigma^{n-1} = 0."""
        assert pauli.root_sum_error(n) <= TestTolerances.PAULI

    def test_power_reduced_mod_n(self) -> None:
        """Test that sigma^{n+1} equals sigma exactly."""
        assert pauli.root_of_unity(5, 6) == pauli.root_of_unity(5, 1)


class TestVandermonde:
    """Fourier matrix diagonalizing the shift."""

    def test_two_dimensions_is_hadamard(self) -> None:
        """Test that n = 2 gives the Hadamard matrix."""
        hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert np.max(np.abs(pauli.vandermonde_w(2) - hadamard)) <= 1e-15

    @pytest.mark.parametrize("n", DIMENSIONS)
    def test_unitary(self, n) -> None:
        """Test W W^dagger = 1 and the closed form of W^dagger."""
        assert pauli.vandermonde_error(n) <= TestTolerances.PAULI

    @pytest.mark.parametrize("n", DIMENSIONS)
    def test_diagonalizes_shift(self, n) -> None:
        """Test W Sigma_3 W^dagger = Sigma_1."""
        assert pauli.diagonalize_shift(n)

    def test_worked_three_dimensional_case(self) -> None:
        """Test the explicit n = 3 matrices."""
        assert pauli.worked_three_error() <= TestTolerances.PAULI
