"""Centralized test data and constants for the test suite."""

import math

import numpy as np


class TestSeeds:
    """Seeds used across randomized tests."""

    DEFAULT = 42
    ALTERNATE = 7


class TestTolerances:
    """Thresholds shared by the identity tests."""

    EXACT = 0.0
    LINALG = 1e-10
    IDENTITY = 1e-11
    PAULI = 1e-12
    CCU = 1e-10
    CCCU = 1e-9
    KERNEL = 1e-9
    HOLONOMY = 1e-6
    REVERSAL = 1e-8
    TRIVIAL_LOOP = 1e-12


class TestVolumes:
    """Closed-form Grassmannian volumes ``Vol(G_{k,n})``."""

    GRASSMANN = {
        (1, 2): math.pi,
        (1, 3): math.pi**2 / 2,
        (2, 3): math.pi**2 / 2,
        (2, 4): math.pi**4 / 12,
    }
    SPHERE = {1: 2 * math.pi, 2: 2 * math.pi**2, 3: math.pi**3}
    UNITARY_2 = 4 * math.pi**3


class TestMatrices:
    """Small matrices with known properties."""

    WALSH_T2 = np.array(
        [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], dtype=np.complex128
    ) / 2
    WALSH_T3 = np.array(
        [
            [1, 1, 1, 1, 1, 1, 1, 1],
            [1, -1, 1, -1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1, 1, -1, -1],
            [1, -1, -1, 1, 1, -1, -1, 1],
            [1, 1, 1, 1, -1, -1, -1, -1],
            [1, -1, 1, -1, -1, 1, -1, 1],
            [1, 1, -1, -1, -1, -1, 1, 1],
            [1, -1, -1, 1, -1, 1, 1, -1],
        ],
        dtype=np.complex128,
    ) / (2 * np.sqrt(2))
    TOFFOLI_PERMUTATION = [0, 1, 2, 3, 4, 5, 7, 6]
    DIAG_KERNEL = np.diag([2.0, 2.0, -1.0, 0.0]).astype(np.complex128)
    NOT_HERMITIAN = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    LARGE_NEARLY_HERMITIAN = np.array(
        [[20_000.0, 1e-8], [0.0, -30_000.0]], dtype=np.complex128
    )
    CNOT = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    )


class TestChecks:
    """Check ids exercised by the suite tests."""

    WALSH = "gates.walsh.t2"
    FAST = [
        "gates",
        "pauli",
        "grassmann.volume.symmetry",
        "grassmann.quadrature.k1",
        "synth.gate-count",
    ]
    CSV_HEADER = "check_id,paper_anchor,status,max_error,runtime_ms,seed"
