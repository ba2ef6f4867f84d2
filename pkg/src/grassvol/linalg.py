"""Dense complex matrix algebra.

Kronecker products, LU determinants, a cyclic complex Jacobi eigensolver for
Hermitian matrices, the unitary exponential ``exp(i * scale * h)`` and the
unitarity/projection predicates used across the package.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import lu_factor

from common.utils import ComplexMatrix

logger = logging.getLogger(__name__)

LINALG_TOL = 1e-10
PREDICATE_TOL = 1e-9

_MAX_SWEEPS = 64


class ShapeError(ValueError):
    """Raised when matrix dimensions do not fit an operation."""


class NotSquareError(ShapeError):
    """Raised when a square matrix is required."""


class NotHermitianError(ValueError):
    """Raised when a Hermitian matrix is required."""


def as_matrix(a: ArrayLike) -> ComplexMatrix:
    """Coerce ``a`` to a finite two-dimensional complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _square(a: ArrayLike) -> ComplexMatrix:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    return m


def max_norm(a: ArrayLike) -> float:
    """Return the largest absolute entry of ``a`` (0 for empty input)."""
    m = np.asarray(a)
    return float(np.max(np.abs(m))) if m.size else 0.0


def dagger(a: ArrayLike) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def kron(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Kronecker product with entry ``(ip, jq) = a[i, j] * b[p, q]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors: ArrayLike) -> ComplexMatrix:
    """Left-to-right Kronecker product of ``factors``; empty gives ``[[1]]``."""
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = np.kron(result, as_matrix(factor))
    return result


def det(a: ArrayLike) -> complex:
    """Determinant through a partially pivoted LU factorization.

    Raises:
        NotSquareError: If ``a`` is not square.
    """
    m = _square(a)
    if m.shape[0] == 0:
        return 1.0 + 0.0j
    lu, piv = lu_factor(m, check_finite=False)
    swaps = int(np.count_nonzero(piv != np.arange(m.shape[0])))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def is_hermitian(a: ArrayLike, tol: float = LINALG_TOL) -> bool:
    """Return whether ``max|a - a^dagger| <= tol * max(1, max|a|)``."""
    m = _square(a)
    return max_norm(m - m.conj().T) <= tol * max(1.0, max_norm(m))


def is_unitary(a: ArrayLike, tol: float = PREDICATE_TOL) -> bool:
    """Return whether ``max|a^dagger a - 1| <= tol``."""
    return unitarity_deviation(a) <= tol


def unitarity_deviation(a: ArrayLike) -> float:
    """Max-norm distance of ``a^dagger a`` from the identity."""
    m = _square(a)
    return max_norm(m.conj().T @ m - np.eye(m.shape[0]))


def is_projection(a: ArrayLike, tol: float = PREDICATE_TOL) -> bool:
    """Return whether ``a`` is idempotent and Hermitian within ``tol``."""
    m = _square(a)
    return max_norm(m @ m - m) <= tol and max_norm(m - m.conj().T) <= tol


@dataclass(frozen=True)
class HermitianEigen:
    """Ascending real eigenvalues with eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        """Return ``U diag(lambda) U^dagger``."""
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    """2x2 unitary G with ``G^dagger [[app, apq], [conj(apq), aqq]] G`` diagonal."""
    magnitude = abs(apq)
    phase = apq / magnitude
    theta = (aqq - app) / (2.0 * magnitude)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def hermitian_eigen(a: ArrayLike, tol: float = LINALG_TOL) -> HermitianEigen:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation to the resulting block. Sweeps
    repeat until no off-diagonal entry exceeds ``eps * ||a||_F``.

    Args:
        a: Square matrix with ``max|a - a^dagger| <= tol``.
        tol: Hermiticity tolerance for the input check.

    Returns:
        Eigenvalues sorted ascending and the matching orthonormal eigenvectors.

    Raises:
        NotHermitianError: If the input is not Hermitian within ``tol``.
        numpy.linalg.LinAlgError: If the sweeps fail to converge.
    """
    m = _square(a)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian: max|a - a^dagger| = {max_norm(m - m.conj().T):.3e}"
        )

    n = m.shape[0]
    work = (m + m.conj().T) / 2
    vectors = np.eye(n, dtype=np.complex128)
    threshold = np.finfo(float).eps * max(float(np.linalg.norm(work)), np.finfo(float).tiny)

    for sweep in range(_MAX_SWEEPS):
        rotations = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if abs(apq) <= threshold:
                    continue
                g = _rotation(work[p, p].real, work[q, q].real, apq)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                work[p, q] = work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vectors[:, idx] = vectors[:, idx] @ g
                rotations += 1
        if rotations == 0:
            logger.debug(f"Jacobi converged for n={n} after {sweep} sweeps")
            break
    else:
        raise np.linalg.LinAlgError(f"Jacobi sweeps did not converge for n={n}")

    values = np.real(np.diag(work))
    order = np.argsort(values, kind="stable")
    return HermitianEigen(eigenvalues=values[order], eigenvectors=vectors[:, order])


def unitary_exp(h: ArrayLike, scale: float = 1.0, tol: float = LINALG_TOL) -> ComplexMatrix:
    """Return ``exp(i * scale * h)`` for Hermitian ``h``.

    Raises:
        NotHermitianError: If ``h`` is not Hermitian within ``tol``.
    """
    eig = hermitian_eigen(h, tol)
    u = eig.eigenvectors
    return (u * np.exp(1j * scale * eig.eigenvalues)) @ u.conj().T


__all__ = [
    "LINALG_TOL",
    "PREDICATE_TOL",
    "HermitianEigen",
    "NotHermitianError",
    "NotSquareError",
    "ShapeError",
    "as_matrix",
    "dagger",
    "det",
    "hermitian_eigen",
    "is_hermitian",
    "is_projection",
    "is_unitary",
    "kron",
    "kron_all",
    "max_norm",
    "unitarity_deviation",
    "unitary_exp",
]
