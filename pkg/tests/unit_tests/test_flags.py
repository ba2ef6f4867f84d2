"""Unit tests for the exponential kernel and its flag classification."""

import numpy as np
import pytest

from common.utils import haar_unitary
from grassvol import flags
from grassvol.grassmann import flag_volume, grassmann_volume
from tests.test_data import TestMatrices, TestTolerances


def conjugated(diagonal, rng) -> np.ndarray:
    u = haar_unitary(len(diagonal), rng)
    return u @ np.diag(diagonal).astype(np.complex128) @ u.conj().T


class TestKernelMembership:
    """exp(2 pi i X) = 1 test."""

    def test_integer_diagonal(self) -> None:
        """Test that an integer diagonal matrix is in the kernel."""
        assert flags.in_kernel(TestMatrices.DIAG_KERNEL)

    def test_conjugated_integer_spectrum(self, rng) -> None:
        """Test that unitary conjugation preserves membership."""
        assert flags.in_kernel(conjugated([3, -1, -1, 0, 2], rng))

    def test_half_integer_shift_leaves_kernel(self, rng) -> None:
        """Test that X + 0.3 is not in the kernel."""
        x = conjugated([1, 0, 0], rng) + 0.3 * np.eye(3)
        assert not flags.in_kernel(x)

    def test_eigenvector_shift_leaves_kernel(self, rng) -> None:
        """Test that a rank-one shift of 10 kernel_tol along an eigenvector is detected."""
        u = haar_unitary(3, rng)
        x = u @ np.diag([1.0, 0.0, 0.0]).astype(np.complex128) @ u.conj().T
        v = u[:, 0]
        assert flags.in_kernel(x)
        assert not flags.in_kernel(x + 10 * flags.KERNEL_TOL * np.outer(v, v.conj()))

    def test_sub_tolerance_shift_stays_in_kernel(self, rng) -> None:
        """Test that a shift far below kernel_tol is still accepted."""
        u = haar_unitary(3, rng)
        x = u @ np.diag([1.0, 0.0, 0.0]).astype(np.complex128) @ u.conj().T
        v = u[:, 0]
        assert flags.in_kernel(x + 1e-9 * np.outer(v, v.conj()))

    def test_large_entries_use_relative_hermiticity(self) -> None:
        """Test that rounding-level asymmetry on a large matrix is not refused."""
        x = TestMatrices.LARGE_NEARLY_HERMITIAN
        assert flags.in_kernel(x)
        assert flags.spectral_type(x).pairs == ((-30_000, 1), (20_000, 1))

    def test_non_hermitian_refused(self) -> None:
        """Test that a nilpotent matrix is not a kernel candidate."""
        with pytest.raises(flags.NotHermitianError):
            flags.in_kernel(TestMatrices.NOT_HERMITIAN)

    def test_zero_matrix(self) -> None:
        """Test that zero is in the kernel with a single block."""
        assert flags.spectral_type(np.zeros((3, 3))).pairs == ((0, 3),)


class TestSpectralType:
    """Grouping of integer eigenvalues."""

    def test_groups_multiplicities(self) -> None:
        """Test eigenvalues sorted ascending with counts."""
        stype = flags.spectral_type(TestMatrices.DIAG_KERNEL)
        assert stype.pairs == ((-1, 1), (0, 1), (2, 2))
        assert stype.dimension == 4
        assert stype.multiplicities == [1, 1, 2]

    def test_non_increasing_rejected(self) -> None:
        """Test that eigenvalues must be strictly increasing."""
        with pytest.raises(ValueError, match="strictly increasing"):
            flags.SpectralType(pairs=((1, 1), (1, 2)))

    def test_non_integer_eigenvalue(self) -> None:
        """Test that a half-integer spectrum is rejected."""
        with pytest.raises(flags.NotInKernelError, match="not integers"):
            flags.spectral_type(np.diag([0.0, 0.5]))


class TestSpectralDecomposition:
    """Eigenprojection decomposition of kernel elements."""

    def test_reconstructs_input(self, rng) -> None:
        """Test that sum n_j P_j recovers X."""
        x = conjugated([2, 2, -1, 0, 0, 0], rng)
        decomposition = flags.spectral_decompose(x)
        assert np.max(np.abs(decomposition.reconstruct() - x)) <= TestTolerances.KERNEL

    def test_projections_orthogonal_and_complete(self, rng) -> None:
        """Test P_k P_l = delta_kl P_l and sum P_j = 1."""
        decomposition = flags.spectral_decompose(conjugated([1, -2, 1, 4], rng))
        assert decomposition.orthogonality_error() <= TestTolerances.KERNEL
        assert decomposition.completeness_error() <= TestTolerances.KERNEL
        assert [p.k for p in decomposition.projections] == [1, 2, 1]


class TestClassification:
    """Flag descriptors and full reports."""

    def test_descriptor(self) -> None:
        """Test block sizes and complex dimension (n^2 - sum d^2) / 2."""
        descriptor = flags.flag_descriptor(flags.SpectralType(pairs=((0, 2), (1, 1), (5, 3))))
        assert descriptor.quotient == [2, 1, 3]
        assert descriptor.complex_dimension == (36 - 4 - 1 - 9) // 2

    def test_two_blocks_give_grassmannian(self) -> None:
        """Test that two eigenvalues describe G_{k,n}."""
        report = flags.classify(np.diag([0.0, 0.0, 1.0]))
        assert report.in_kernel
        assert report.blocks == [2, 1]
        assert report.complex_dimension == 2
        assert report.flag_volume == pytest.approx(grassmann_volume(1, 3), rel=1e-13)

    def test_report_for_kernel_element(self) -> None:
        """Test the serialized report fields."""
        report = flags.classify(TestMatrices.DIAG_KERNEL)
        assert report.spectral_type == [(-1, 1), (0, 1), (2, 2)]
        assert report.flag_volume == pytest.approx(flag_volume([1, 1, 2]))

    def test_report_outside_kernel(self) -> None:
        """Test that non-members carry only the membership flag."""
        report = flags.classify(np.diag([0.25, 1.0]))
        assert not report.in_kernel
        assert report.spectral_type is None
        assert report.blocks is None
