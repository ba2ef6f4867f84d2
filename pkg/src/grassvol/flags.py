"""Kernel of ``X -> exp(2 pi i X)`` on Hermitian matrices.

Kernel elements have integer spectra. They are classified by spectral type,
split into mutually orthogonal eigenprojections, and each class is described
by its generalized flag manifold ``U(n) / (U(d_1) x ... x U(d_j))``.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from common.basemodel import FlagDescriptor, FlagReport
from common.utils import ComplexMatrix

from .grassmann import GrassmannPoint, flag_volume
from .linalg import (
    LINALG_TOL,
    PREDICATE_TOL,
    NotHermitianError,
    as_matrix,
    hermitian_eigen,
    is_hermitian,
    max_norm,
    unitary_exp,
)

logger = logging.getLogger(__name__)

KERNEL_TOL = 1e-7


class NotInKernelError(ValueError):
    """Raised when a matrix has a non-integer eigenvalue."""


@dataclass(frozen=True)
class SpectralType:
    """Integer eigenvalues with multiplicities, eigenvalues strictly increasing."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(value), int(mult)) for value, mult in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        values = [value for value, _ in pairs]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"eigenvalues must be strictly increasing: {values}")
        if any(mult < 1 for _, mult in pairs):
            raise ValueError("multiplicities must be positive")

    @property
    def dimension(self) -> int:
        """Ambient dimension ``sum d_j``."""
        return sum(mult for _, mult in self.pairs)

    @property
    def multiplicities(self) -> list[int]:
        """Block sizes ``d_1, ..., d_j`` in eigenvalue order."""
        return [mult for _, mult in self.pairs]


@dataclass(frozen=True)
class SpectralDecomposition:
    """``X = sum_j n_j P_j`` with one projection per integer eigenvalue."""

    spectral_type: SpectralType
    projections: tuple[GrassmannPoint, ...]

    def reconstruct(self) -> ComplexMatrix:
        """Return ``sum_j n_j P_j``."""
        n = self.spectral_type.dimension
        total = np.zeros((n, n), dtype=np.complex128)
        for (value, _), projection in zip(self.spectral_type.pairs, self.projections):
            total += value * projection.p
        return total

    def orthogonality_error(self) -> float:
        """Max of ``|P_k P_l - delta_kl P_l|`` over all pairs."""
        error = 0.0
        for i, a in enumerate(self.projections):
            for j, b in enumerate(self.projections):
                expected = b.p if i == j else 0.0
                error = max(error, max_norm(a.p @ b.p - expected))
        return error

    def completeness_error(self) -> float:
        """Max-norm distance of ``sum_j P_j`` from the identity."""
        n = self.spectral_type.dimension
        total = sum((projection.p for projection in self.projections), np.zeros((n, n)))
        return max_norm(total - np.eye(n))


def _checked_hermitian(x: ArrayLike) -> ComplexMatrix:
    m = as_matrix(x)
    if m.shape[0] != m.shape[1] or not is_hermitian(m, LINALG_TOL):
        raise NotHermitianError("kernel membership is only defined for Hermitian matrices")
    return m


def in_kernel(x: ArrayLike, tol: float = KERNEL_TOL) -> bool:
    """Return whether ``max|exp(2 pi i X) - 1| <= tol``.

    Raises:
        NotHermitianError: If ``x`` is not Hermitian.
    """
    m = _checked_hermitian(x)
    return max_norm(unitary_exp(m, 2.0 * math.pi) - np.eye(m.shape[0])) <= tol


def _rounded_spectrum(x: ArrayLike, tol: float) -> tuple[np.ndarray, ComplexMatrix, np.ndarray]:
    m = _checked_hermitian(x)
    eig = hermitian_eigen(m)
    rounded = np.rint(eig.eigenvalues)
    residual = max_norm(eig.eigenvalues - rounded)
    if residual > tol:
        raise NotInKernelError(
            f"eigenvalues are not integers: rounding residual {residual:.3e} > {tol:.1e}"
        )
    return rounded.astype(np.int64), eig.eigenvectors, eig.eigenvalues


def spectral_type(x: ArrayLike, tol: float = KERNEL_TOL) -> SpectralType:
    """Group the rounded integer eigenvalues of ``x`` with their multiplicities.

    Raises:
        NotInKernelError: If an eigenvalue is farther than ``tol`` from an integer.
    """
    rounded, _, _ = _rounded_spectrum(x, tol)
    counts = Counter(int(value) for value in rounded)
    return SpectralType(pairs=tuple(sorted(counts.items())))


def spectral_decompose(
    x: ArrayLike, tol: float = KERNEL_TOL, projection_tol: float = PREDICATE_TOL
) -> SpectralDecomposition:
    """Split ``x`` into eigenprojections ``P_j = sum v v^dagger`` per integer eigenvalue."""
    rounded, vectors, _ = _rounded_spectrum(x, tol)
    counts = Counter(int(value) for value in rounded)
    stype = SpectralType(pairs=tuple(sorted(counts.items())))
    n = len(rounded)

    projections = []
    for value, mult in stype.pairs:
        columns = vectors[:, rounded == value]
        projections.append(
            GrassmannPoint(n=n, k=mult, p=columns @ columns.conj().T, tol=projection_tol)
        )
    logger.debug(f"Decomposed {n}x{n} kernel element into {len(projections)} projections")
    return SpectralDecomposition(spectral_type=stype, projections=tuple(projections))


def flag_descriptor(stype: SpectralType) -> FlagDescriptor:
    """Block sizes of the flag manifold of ``stype`` and its complex dimension."""
    blocks = stype.multiplicities
    n = sum(blocks)
    dimension = (n * n - sum(d * d for d in blocks)) // 2
    return FlagDescriptor(quotient=blocks, complex_dimension=dimension)


def classify(x: ArrayLike, tol: float = KERNEL_TOL) -> FlagReport:
    """Full classification record for one Hermitian matrix."""
    if not in_kernel(x, tol):
        return FlagReport(in_kernel=False)
    stype = spectral_type(x, tol)
    descriptor = flag_descriptor(stype)
    return FlagReport(
        in_kernel=True,
        spectral_type=list(stype.pairs),
        blocks=descriptor.quotient,
        complex_dimension=descriptor.complex_dimension,
        flag_volume=flag_volume(descriptor.quotient),
    )


__all__ = [
    "KERNEL_TOL",
    "NotInKernelError",
    "SpectralDecomposition",
    "SpectralType",
    "classify",
    "flag_descriptor",
    "in_kernel",
    "spectral_decompose",
    "spectral_type",
]
