"""Utility & helper functions."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.stats import unitary_group

from .basemodel import MatrixPayload

ComplexMatrix = NDArray[np.complex128]


def matrix_to_payload(a: NDArray) -> MatrixPayload:
    """Serialize a dense matrix in row-major order.

    Args:
        a: Two-dimensional array; real input is widened to complex.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    rows, cols = a.shape
    entries = [(float(z.real), float(z.imag)) for z in a.ravel()]
    return MatrixPayload(rows=rows, cols=cols, entries=entries)


def matrix_from_payload(payload: MatrixPayload) -> ComplexMatrix:
    """Rebuild the complex matrix described by ``payload``."""
    flat = np.array([complex(re, im) for re, im in payload.entries], dtype=np.complex128)
    return flat.reshape(payload.rows, payload.cols)


def matrix_from_json(text: str | bytes) -> ComplexMatrix:
    """Parse and validate matrix JSON text."""
    return matrix_from_payload(MatrixPayload.model_validate_json(text))


def matrix_to_json(a: NDArray, indent: int | None = None) -> str:
    """Render a matrix as JSON text."""
    return matrix_to_payload(a).model_dump_json(indent=indent)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Return a counter-based Philox generator for ``(seed, stream)``.

    Distinct ``stream`` values give statistically independent sequences, so
    chunked or parallel work is reproducible regardless of scheduling.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def haar_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Draw an ``n x n`` unitary from Haar measure."""
    if n == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1).astype(np.complex128)
    return np.asarray(unitary_group.rvs(n, random_state=rng), dtype=np.complex128)


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> ComplexMatrix:
    """Draw a Hermitian matrix with Gaussian entries."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (g + g.conj().T) / 2


def random_complex(shape: tuple[int, ...], rng: np.random.Generator) -> ComplexMatrix:
    """Draw an array of standard complex Gaussian entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_orthonormal(n: int, k: int, rng: np.random.Generator) -> ComplexMatrix:
    """Return ``n x k`` orthonormal columns from the QR of a Gaussian matrix."""
    q, r = np.linalg.qr(random_complex((n, k), rng))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
