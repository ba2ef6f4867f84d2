"""Qubit gate algebra on ``t`` wires.

Wire 1 is the most significant bit: ``i = i_1 2^{t-1} + ... + i_t``. Permutation
gates (CNOT, repeated CNOT, bit flips) are assembled from basis-state maps so
their entries are exact zeros and ones.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from common.utils import ComplexMatrix

from .grassmann import GrassmannPoint, special_projection
from .linalg import PREDICATE_TOL, ShapeError, as_matrix, is_unitary, kron_all, max_norm

logger = logging.getLogger(__name__)

MAX_QUBITS = 10

IDENTITY_2 = np.eye(2, dtype=np.complex128)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGNS_2 = np.array([[1, 1], [1, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def pauli_matrices() -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """Return copies of ``(sigma_1, sigma_2, sigma_3)``."""
    return SIGMA_1.copy(), SIGMA_2.copy(), SIGMA_3.copy()


def sigma2_relation_error() -> float:
    """Max-norm residual of ``sigma_2 = i sigma_1 sigma_3``."""
    return max_norm(SIGMA_2 - 1j * SIGMA_1 @ SIGMA_3)


@dataclass(frozen=True)
class GateMatrix:
    """A ``2^t x 2^t`` unitary acting on ``t`` wires."""

    t: int
    m: ComplexMatrix
    tol: float = field(default=PREDICATE_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = as_matrix(self.m)
        object.__setattr__(self, "m", m)
        if m.shape != (2**self.t, 2**self.t):
            raise ShapeError(f"gate on {self.t} wires must be {2**self.t}-dimensional")
        if not is_unitary(m, self.tol):
            raise ValueError("gate matrix is not unitary")

    @property
    def n(self) -> int:
        """Hilbert-space dimension ``2^t``."""
        return 2**self.t


def check_wires(t: int, max_qubits: int = MAX_QUBITS) -> None:
    """Reject wire counts outside ``[1, max_qubits]``."""
    if t < 1:
        raise ValueError(f"need at least one wire, got t={t}")
    if t > max_qubits:
        raise ValueError(f"t={t} exceeds the configured limit of {max_qubits} wires")


def bits(t: int, i: int) -> tuple[int, ...]:
    """Return ``(i_1, ..., i_t)``, most significant bit first."""
    if not 0 <= i < 2**t:
        raise ValueError(f"index {i} outside [0, {2**t})")
    return tuple((i >> (t - 1 - position)) & 1 for position in range(t))


def index(bit_values: Sequence[int]) -> int:
    """Inverse of :func:`bits`."""
    result = 0
    for bit in bit_values:
        if bit not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {bit}")
        result = (result << 1) | bit
    return result


def basis_state(t: int, i: int) -> np.ndarray:
    """Column vector ``|i)`` in ``C^{2^t}``."""
    bits(t, i)
    state = np.zeros(2**t, dtype=np.complex128)
    state[i] = 1.0
    return state


def popcount(values: np.ndarray | int) -> np.ndarray:
    """Number of set bits, elementwise."""
    values = np.asarray(values, dtype=np.int64)
    count = np.zeros_like(values)
    while np.any(values):
        count += values & 1
        values = values >> 1
    return count


def bit_dot(i: int, j: int) -> int:
    """Bitwise dot product ``i . j = sum_k i_k j_k``."""
    return int(popcount(i & j))


def permutation_gate(t: int, targets: Sequence[int] | np.ndarray) -> GateMatrix:
    """Gate sending ``|i)`` to ``|targets[i])``."""
    targets = np.asarray(targets, dtype=np.int64)
    n = 2**t
    if sorted(targets.tolist()) != list(range(n)):
        raise ValueError("targets must be a permutation of the basis")
    m = np.zeros((n, n), dtype=np.complex128)
    m[targets, np.arange(n)] = 1.0
    return GateMatrix(t=t, m=m)


def walsh_power(t: int, max_qubits: int = MAX_QUBITS) -> GateMatrix:
    """Return ``W^{(x) t}`` by repeated Kronecker products.

    The sign pattern is built from integer factors and normalized once, so
    every entry is exactly ``+-2^{-t/2}``.
    """
    check_wires(t, max_qubits)
    signs = kron_all(*([SIGNS_2] * t))
    return GateMatrix(t=t, m=signs / np.sqrt(2**t))


def walsh_table(t: int) -> np.ndarray:
    """Exact ``n^{-1/2} (-1)^{i . j}`` table for comparison with :func:`walsh_power`."""
    n = 2**t
    grid = np.arange(n)
    signs = 1 - 2 * (popcount(grid[:, None] & grid[None, :]) % 2)
    return signs / np.sqrt(n)


def row_sum(t: int, i: int) -> float:
    """Return ``sum_j (i|W^{(x) t}|j)``: ``sqrt(2^t)`` for ``i = 0``, else 0."""
    bits(t, i)
    return float(walsh_power(t).m[i, :].sum().real)


def column_sum(t: int, j: int) -> float:
    """Return ``sum_i (i|W^{(x) t}|j)``."""
    bits(t, j)
    return float(walsh_power(t).m[:, j].sum().real)


def character(t: int, i: int, j: int) -> int:
    """Return ``chi_i(j) = (-1)^{i . j}`` on ``Z_2^t``."""
    bits(t, i)
    bits(t, j)
    return -1 if bit_dot(i, j) % 2 else 1


def character_table(t: int) -> np.ndarray:
    """Integer matrix ``[chi_i(j)]``."""
    n = 2**t
    grid = np.arange(n)
    return 1 - 2 * (popcount(grid[:, None] & grid[None, :]) % 2)


def character_multiplicativity_violations(t: int) -> int:
    """Count triples ``(i, j, k)`` with ``chi_i(j xor k) != chi_i(j) chi_i(k)``."""
    table = character_table(t)
    n = 2**t
    grid = np.arange(n)
    xor = grid[:, None] ^ grid[None, :]
    lhs = table[:, xor]
    rhs = table[:, :, None] * table[:, None, :]
    return int(np.count_nonzero(lhs != rhs))


def character_orthogonality_error(t: int) -> int:
    """Max deviation of ``sum_j chi_i(j) chi_i'(j)`` from ``n delta_{ii'}``."""
    table = character_table(t)
    n = 2**t
    return int(np.max(np.abs(table @ table.T - n * np.eye(n, dtype=np.int64))))


def cnot(t: int, control: int, target: int, max_qubits: int = MAX_QUBITS) -> GateMatrix:
    """CNOT sending ``|...a...b...)`` to ``|...a...(a xor b)...)``.

    Raises:
        ValueError: If the wires coincide or fall outside ``[1, t]``.
    """
    check_wires(t, max_qubits)
    if control == target:
        raise ValueError("control and target wires must differ")
    for wire in (control, target):
        if not 1 <= wire <= t:
            raise ValueError(f"wire {wire} outside [1, {t}]")
    basis = np.arange(2**t)
    control_bit = (basis >> (t - control)) & 1
    return permutation_gate(t, basis ^ (control_bit << (t - target)))


@dataclass(frozen=True)
class CnotUniton:
    """``CNOT = 1 - 2P`` on two wires with ``P = D E_1 D^{-1}``."""

    p: GrassmannPoint
    diagonalizer: GateMatrix
    reconstruction_error: float
    diagonalization_error: float


CNOT_PROJECTION = np.array(
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]], dtype=np.complex128
) / 2


def cnot_uniton_decomposition() -> CnotUniton:
    """Write the two-wire CNOT as a uniton and diagonalize its projection.

    The diagonalizer is ``D = (1 (x) W)(sigma_1 (x) sigma_1)``, so that
    ``P = D E_1 D^{-1}``.
    """
    gate = cnot(2, 1, 2).m
    p = GrassmannPoint(n=4, k=1, p=CNOT_PROJECTION)
    flip = np.kron(SIGMA_1, SIGMA_1)
    diagonalizer = GateMatrix(t=2, m=np.kron(IDENTITY_2, HADAMARD) @ flip)
    d = diagonalizer.m
    rebuilt = d @ special_projection(4, 1).p @ d.conj().T
    return CnotUniton(
        p=p,
        diagonalizer=diagonalizer,
        reconstruction_error=max_norm(gate - (np.eye(4) - 2 * p.p)),
        diagonalization_error=max_norm(rebuilt - p.p),
    )


def repeated_cnot(t: int, max_qubits: int = MAX_QUBITS) -> GateMatrix:
    """``C^{(t-1)}``-NOT: flip the last wire iff all other wires are 1.

    Raises:
        ValueError: If ``t < 2``.
    """
    if t < 2:
        raise ValueError(f"repeated CNOT needs t >= 2, got {t}")
    check_wires(t, max_qubits)
    n = 2**t
    targets = np.arange(n)
    targets[[n - 2, n - 1]] = targets[[n - 1, n - 2]]
    return permutation_gate(t, targets)


def repeated_cnot_conjugation_error(t: int) -> float:
    """Residual of ``(1 (x) W) C^{(t-1)}NOT (1 (x) W) = 1 - 2|n-1)(n-1|``."""
    n = 2**t
    side = np.kron(np.eye(n // 2), HADAMARD)
    expected = np.eye(n)
    expected[n - 1, n - 1] = -1.0
    return max_norm(side @ repeated_cnot(t).m @ side - expected)


def f_matrix(t: int, k: int) -> GateMatrix:
    """``F_k = 1_n - 2 E_k = diag(-1_k, 1_{n-k})``."""
    check_wires(t)
    n = 2**t
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    diagonal = np.concatenate([-np.ones(k), np.ones(n - k)])
    return GateMatrix(t=t, m=np.diag(diagonal).astype(np.complex128))


def flip_conjugator(t: int, i: int) -> GateMatrix:
    """``U_i = sigma_1^{i_1} (x) ... (x) sigma_1^{i_t}``, sending ``|0)`` to ``|i)``."""
    factors = [SIGMA_1 if bit else IDENTITY_2 for bit in bits(t, i)]
    return GateMatrix(t=t, m=kron_all(*factors))


def marked_reflection(t: int, i: int) -> GateMatrix:
    """``1_n - 2|i)(i|`` built as ``U_i F_1 U_i``."""
    u = flip_conjugator(t, i).m
    return GateMatrix(t=t, m=u @ f_matrix(t, 1).m @ u)


def flip_conjugator_error(t: int) -> float:
    """Max residual of ``U_i F_1 U_i = 1 - 2|i)(i|`` and ``U_i|0) = |i)`` over all ``i``."""
    n = 2**t
    error = 0.0
    for i in range(n):
        direct = np.eye(n, dtype=np.complex128)
        direct[i, i] = -1.0
        error = max(error, max_norm(marked_reflection(t, i).m - direct))
        error = max(error, max_norm(flip_conjugator(t, i).m @ basis_state(t, 0) - basis_state(t, i)))
    return error


def f_recursion_error(t: int) -> float:
    """Max residual of ``F_k (U_k F_1 U_k) = F_{k+1}`` for ``1 <= k <= n-1``.

    The last step lands on ``F_n = -1_n``.
    """
    n = 2**t
    f1 = f_matrix(t, 1).m
    error = 0.0
    for k in range(1, n):
        u = flip_conjugator(t, k).m
        step = f_matrix(t, k).m @ (u @ f1 @ u)
        error = max(error, max_norm(step - f_matrix(t, k + 1).m))
    return error


def f_recursion_check(t: int, tol: float = 1e-12) -> bool:
    """Return whether the ``F_k`` recursion holds at ``t`` wires."""
    return f_recursion_error(t) <= tol


@dataclass(frozen=True)
class GroverReflections:
    """Marked-state reflection and diffusion about the uniform superposition."""

    marked: GateMatrix
    diffusion: GateMatrix
    uniform: np.ndarray


def grover_reflections(t: int, i: int) -> GroverReflections:
    """Return ``1 - 2|i)(i|`` and ``1 - 2|s)(s|`` with ``|s) = W^{(x) t}|0)``."""
    walsh = walsh_power(t).m
    uniform = walsh @ basis_state(t, 0)
    diffusion = np.eye(2**t) - 2.0 * np.outer(uniform, uniform.conj())
    return GroverReflections(
        marked=marked_reflection(t, i),
        diffusion=GateMatrix(t=t, m=diffusion),
        uniform=uniform,
    )


def grover_error(t: int) -> float:
    """Residuals of the diffusion identity ``W F_1 W`` and the overlaps of ``|s)``."""
    n = 2**t
    walsh = walsh_power(t).m
    reflections = grover_reflections(t, 0)
    s = reflections.uniform
    error = max_norm(reflections.diffusion.m - walsh @ f_matrix(t, 1).m @ walsh)
    error = max(error, abs(np.vdot(s, s) - 1.0))
    error = max(error, max_norm(s - 1.0 / np.sqrt(n)))
    return error


def f1_from_repeated_cnot(t: int) -> GateMatrix:
    """Build ``F_1`` as ``(X^{t-1} (x) sigma_1 W) C^{(t-1)}NOT (X^{t-1} (x) W sigma_1)``."""
    flips = kron_all(*([SIGMA_1] * (t - 1)))
    left = np.kron(flips, SIGMA_1 @ HADAMARD)
    right = np.kron(flips, HADAMARD @ SIGMA_1)
    return GateMatrix(t=t, m=left @ repeated_cnot(t).m @ right)


def uniton(point: GrassmannPoint) -> ComplexMatrix:
    """Return the reflection ``1 - 2P``."""
    return np.eye(point.n) - 2.0 * point.p


def uniton_product(ps: Sequence[GrassmannPoint], n: int | None = None) -> GateMatrix:
    """Return ``prod_j (1 - 2P_j)`` in list order.

    Args:
        ps: Projections sharing one ambient dimension ``2^t``.
        n: Ambient dimension, required when ``ps`` is empty.

    Raises:
        ShapeError: On mixed or non power-of-two dimensions.
    """
    dims = {p.n for p in ps}
    if n is not None:
        dims.add(n)
    if len(dims) != 1:
        raise ShapeError(f"projections must share one dimension, got {sorted(dims)}")
    (dim,) = dims
    t = dim.bit_length() - 1
    if dim != 2**t:
        raise ShapeError(f"dimension {dim} is not a power of two")
    product = np.eye(dim, dtype=np.complex128)
    for point in ps:
        product = product @ uniton(point)
    return GateMatrix(t=t, m=product)


def full_uniton(ps: Sequence[GrassmannPoint]) -> ComplexMatrix:
    """Return ``prod_{j=1}^{n-1} (1 - 2P_j)`` for projections of ranks ``1, ..., n-1``."""
    if not ps:
        raise ValueError("need at least one projection")
    n = ps[0].n
    if [p.k for p in ps] != list(range(1, n)) or any(p.n != n for p in ps):
        raise ValueError("full unitons need one projection of each rank 1..n-1 in order")
    product = np.eye(n, dtype=np.complex128)
    for point in ps:
        product = product @ uniton(point)
    return product


def controlled_matrix(t: int, controls: Sequence[int], target: int, u: ArrayLike) -> ComplexMatrix:
    """Apply ``u`` on ``target`` iff every wire in ``controls`` carries 1."""
    u = as_matrix(u)
    if u.shape != (2, 2):
        raise ShapeError("controlled operations act with a 2x2 unitary")
    wires = [*controls, target]
    if len(set(wires)) != len(wires) or any(not 1 <= w <= t for w in wires):
        raise ValueError(f"invalid wires {wires} for t={t}")
    n = 2**t
    basis = np.arange(n)
    target_bit = 1 << (t - target)
    active = np.ones(n, dtype=bool)
    for wire in controls:
        active &= ((basis >> (t - wire)) & 1).astype(bool)
    m = np.eye(n, dtype=np.complex128)
    for low in basis[active & ((basis & target_bit) == 0)]:
        pair = [low, low | target_bit]
        m[np.ix_(pair, pair)] = u
    return m


__all__ = [
    "HADAMARD",
    "SIGNS_2",
    "IDENTITY_2",
    "MAX_QUBITS",
    "SIGMA_1",
    "SIGMA_2",
    "SIGMA_3",
    "CnotUniton",
    "GateMatrix",
    "GroverReflections",
    "basis_state",
    "bit_dot",
    "bits",
    "character",
    "character_multiplicativity_violations",
    "character_orthogonality_error",
    "character_table",
    "check_wires",
    "cnot",
    "cnot_uniton_decomposition",
    "column_sum",
    "controlled_matrix",
    "f1_from_repeated_cnot",
    "f_matrix",
    "f_recursion_check",
    "f_recursion_error",
    "flip_conjugator",
    "flip_conjugator_error",
    "full_uniton",
    "grover_error",
    "grover_reflections",
    "index",
    "marked_reflection",
    "pauli_matrices",
    "permutation_gate",
    "popcount",
    "repeated_cnot",
    "repeated_cnot_conjugation_error",
    "row_sum",
    "sigma2_relation_error",
    "uniton",
    "uniton_product",
    "walsh_power",
    "walsh_table",
]
