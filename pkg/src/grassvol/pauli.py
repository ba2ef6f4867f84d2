"""Clock and shift matrices in dimension ``n`` and their Fourier diagonalizer."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from common.utils import ComplexMatrix

from .linalg import max_norm

logger = logging.getLogger(__name__)


def root_of_unity(n: int, power: int = 1) -> complex:
    """Return ``sigma^power`` for ``sigma = exp(2 pi i / n)``, reduced mod ``n``."""
    return complex(np.exp(2j * np.pi * (power % n) / n))


def _root_table(n: int, exponents: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * (exponents % n) / n)


@dataclass(frozen=True)
class ClockShiftPair:
    """Cyclic shift ``Sigma_1`` and diagonal clock ``Sigma_3`` in dimension ``n``."""

    n: int
    shift: ComplexMatrix
    clock: ComplexMatrix

    def __post_init__(self) -> None:
        if self.shift.shape != (self.n, self.n) or self.clock.shape != (self.n, self.n):
            raise ValueError(f"clock and shift must be {self.n}x{self.n}")
        if not np.all(np.isin(self.shift, (0.0, 1.0))):
            raise ValueError("shift must be a 0/1 matrix")
        if max_norm(self.clock - np.diag(np.diag(self.clock))) != 0.0:
            raise ValueError("clock must be diagonal")

    @property
    def sigma(self) -> complex:
        """Primitive root ``exp(2 pi i / n)``."""
        return root_of_unity(self.n)


def clock_shift(n: int) -> ClockShiftPair:
    """Build ``Sigma_1`` (``|j) -> |j+1 mod n)``) and ``Sigma_3 = diag(sigma^j)``.

    Raises:
        ValueError: If ``n < 2``.
    """
    if n < 2:
        raise ValueError(f"clock/shift matrices need n >= 2, got {n}")
    shift = np.zeros((n, n), dtype=np.complex128)
    shift[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    clock = np.diag(_root_table(n, np.arange(n))).astype(np.complex128)
    return ClockShiftPair(n=n, shift=shift, clock=clock)


def vandermonde_w(n: int) -> ComplexMatrix:
    """Generalized Walsh-Hadamard matrix ``W_{jk} = sigma^{-jk} / sqrt(n)``.

    Row 1 carries the powers of ``sigma^{n-1}``; for ``n = 2`` this is the
    Hadamard matrix. ``W^dagger`` has entries ``sigma^{jk} / sqrt(n)``.
    """
    if n < 2:
        raise ValueError(f"Vandermonde matrix needs n >= 2, got {n}")
    grid = np.arange(n)
    return _root_table(n, -np.outer(grid, grid)) / np.sqrt(n)


def vandermonde_w_dagger(n: int) -> ComplexMatrix:
    """Closed form of ``W^dagger``: entries ``sigma^{jk} / sqrt(n)``."""
    grid = np.arange(n)
    return _root_table(n, np.outer(grid, grid)) / np.sqrt(n)


def matrix_power(a: ComplexMatrix, exponent: int) -> ComplexMatrix:
    """Non-negative integer power by repeated products."""
    return np.linalg.matrix_power(a, exponent)


def clock_shift_error(n: int) -> float:
    """Residuals of ``Sigma^n = 1``, the adjoint powers and ``Sigma_3 Sigma_1 = sigma Sigma_1 Sigma_3``."""
    pair = clock_shift(n)
    s1, s3 = pair.shift, pair.clock
    eye = np.eye(n)
    residuals = [
        max_norm(matrix_power(s1, n) - eye),
        max_norm(matrix_power(s3, n) - eye),
        max_norm(s1.conj().T - matrix_power(s1, n - 1)),
        max_norm(s3.conj().T - matrix_power(s3, n - 1)),
        max_norm(s3 @ s1 - pair.sigma * s1 @ s3),
    ]
    return max(residuals)


def weyl_commutation_error(n: int) -> float:
    """Max residual of ``Sigma_3^a Sigma_1^b = sigma^{ab} Sigma_1^b Sigma_3^a`` over ``0 <= a, b < n``."""
    pair = clock_shift(n)
    error = 0.0
    for a in range(n):
        clock_a = matrix_power(pair.clock, a)
        for b in range(n):
            shift_b = matrix_power(pair.shift, b)
            lhs = clock_a @ shift_b
            rhs = root_of_unity(n, a * b) * shift_b @ clock_a
            error = max(error, max_norm(lhs - rhs))
    return error


def root_sum_error(n: int) -> float:
    """Residuals of ``1 + sigma + ... + sigma^{n-1} = 0`` and ``conj(sigma) = sigma^{n-1}``."""
    sigma = root_of_unity(n)
    total = _root_table(n, np.arange(n)).sum()
    return max(abs(total), abs(np.conj(sigma) - root_of_unity(n, n - 1)))


def vandermonde_error(n: int) -> float:
    """Residuals of ``W W^dagger = 1`` and of ``W^dagger`` against its closed form."""
    w = vandermonde_w(n)
    return max(
        max_norm(w @ w.conj().T - np.eye(n)),
        max_norm(w.conj().T - vandermonde_w_dagger(n)),
    )


def diagonalize_shift_error(n: int) -> float:
    """Residual of ``W Sigma_3 W^dagger = Sigma_1``."""
    pair = clock_shift(n)
    w = vandermonde_w(n)
    return max_norm(w @ pair.clock @ w.conj().T - pair.shift)


def diagonalize_shift(n: int, tol: float = 1e-12) -> bool:
    """Return whether ``W Sigma_3 W^dagger = Sigma_1`` holds within ``tol``."""
    return diagonalize_shift_error(n) <= tol


def worked_three_error() -> float:
    """Compare ``n = 3`` against ``(1/sqrt 3) [[1,1,1],[1,s^2,s],[1,s,s^2]]``."""
    s = root_of_unity(3)
    expected = np.array([[1, 1, 1], [1, s**2, s], [1, s, s**2]], dtype=np.complex128) / np.sqrt(3)
    chain = vandermonde_w(3) @ clock_shift(3).clock @ vandermonde_w(3).conj().T
    shifted = np.array([[0, 0, 3], [3, 0, 0], [0, 3, 0]], dtype=np.complex128) / 3
    return max(max_norm(vandermonde_w(3) - expected), max_norm(chain - shifted))


__all__ = [
    "ClockShiftPair",
    "clock_shift",
    "clock_shift_error",
    "diagonalize_shift",
    "diagonalize_shift_error",
    "matrix_power",
    "root_of_unity",
    "root_sum_error",
    "vandermonde_error",
    "vandermonde_w",
    "vandermonde_w_dagger",
    "weyl_commutation_error",
    "worked_three_error",
]
