"""Doubly and triply controlled unitaries from controlled roots and CNOTs.

A ``C^k``-U gate is assembled from singly controlled powers of a root ``V``
with ``V^{2^{k-1}} = U``: every non-empty subset of controls contributes
``V^{+-(xor of the subset)}`` and the signed parities add up to
``2^{k-1} x_1 ... x_k``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import schur

from common.basemodel import CircuitPayload, GatePayload
from common.utils import ComplexMatrix, matrix_from_payload, matrix_to_payload

from .gates import SIGMA_1, GateMatrix, cnot, controlled_matrix, repeated_cnot
from .linalg import PREDICATE_TOL, as_matrix, is_unitary, max_norm

logger = logging.getLogger(__name__)

_BRANCH_EPS = 1e-12


class CircuitError(ValueError):
    """Raised for malformed circuits or gate operands."""


@dataclass(frozen=True)
class ControlledSingle:
    """Apply the 2x2 unitary ``u`` to ``target`` iff ``control`` is 1."""

    control: int
    target: int
    u: ComplexMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", as_matrix(self.u))


@dataclass(frozen=True)
class WireCnot:
    """Flip ``target`` iff ``control`` is 1."""

    control: int
    target: int


Gate = ControlledSingle | WireCnot


@dataclass(frozen=True)
class QuantumCircuit:
    """Gates on ``t`` wires in temporal order (first gate acts first)."""

    t: int
    gates: tuple[Gate, ...] = ()
    tol: float = field(default=PREDICATE_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.t < 1:
            raise CircuitError(f"a circuit needs at least one wire, got t={self.t}")
        for position, gate in enumerate(self.gates):
            if gate.control == gate.target:
                raise CircuitError(f"gate {position}: control and target coincide")
            for wire in (gate.control, gate.target):
                if not 1 <= wire <= self.t:
                    raise CircuitError(f"gate {position}: wire {wire} outside [1, {self.t}]")
            if isinstance(gate, ControlledSingle):
                if gate.u.shape != (2, 2) or not is_unitary(gate.u, self.tol):
                    raise CircuitError(f"gate {position}: operand is not a 2x2 unitary")

    def then(self, other: QuantumCircuit) -> QuantumCircuit:
        """Return this circuit followed by ``other``."""
        if other.t != self.t:
            raise CircuitError("circuits act on different wire counts")
        return QuantumCircuit(t=self.t, gates=self.gates + other.gates, tol=self.tol)

    def __len__(self) -> int:
        return len(self.gates)


def embed(gate: Gate, t: int) -> ComplexMatrix:
    """Return the ``2^t``-dimensional matrix of one gate."""
    if isinstance(gate, WireCnot):
        return cnot(t, gate.control, gate.target).m
    return controlled_matrix(t, [gate.control], gate.target, gate.u)


def simulate(circuit: QuantumCircuit) -> GateMatrix:
    """Multiply the gate embeddings so the first gate is the rightmost factor."""
    total = np.eye(2**circuit.t, dtype=np.complex128)
    for gate in circuit.gates:
        total = embed(gate, circuit.t) @ total
    return GateMatrix(t=circuit.t, m=total)


def circuit_to_payload(circuit: QuantumCircuit) -> CircuitPayload:
    """Serialize to ``{t, gates: [{kind, control, target, u?}]}``."""
    gates = []
    for gate in circuit.gates:
        if isinstance(gate, WireCnot):
            gates.append(GatePayload(kind="cnot", control=gate.control, target=gate.target))
        else:
            gates.append(
                GatePayload(
                    kind="cu", control=gate.control, target=gate.target, u=matrix_to_payload(gate.u)
                )
            )
    return CircuitPayload(t=circuit.t, gates=gates)


def circuit_from_payload(payload: CircuitPayload) -> QuantumCircuit:
    """Rebuild and validate a circuit from its payload."""
    gates: list[Gate] = []
    for item in payload.gates:
        if item.kind == "cnot":
            gates.append(WireCnot(control=item.control, target=item.target))
        else:
            assert item.u is not None
            gates.append(
                ControlledSingle(control=item.control, target=item.target, u=matrix_from_payload(item.u))
            )
    return QuantumCircuit(t=payload.t, gates=tuple(gates))


def mod2_identity_check(order: int) -> bool:
    """Exhaustively check the signed-parity identities over ``Z_2^order``.

    Order 2: ``x + y - x^y = 2xy``. Order 3:
    ``x + y + z - x^y - x^z - y^z + x^y^z = 4xyz``.
    """
    if order not in (2, 3):
        raise ValueError(f"only orders 2 and 3 are supported, got {order}")
    for values in itertools.product((0, 1), repeat=order):
        if signed_parity_sum(values) != 2 ** (order - 1) * int(np.prod(values)):
            return False
    return True


def signed_parity_sum(values: Sequence[int]) -> int:
    """Return ``sum over non-empty subsets S of (-1)^{|S|+1} xor(S)``."""
    total = 0
    for size in range(1, len(values) + 1):
        for subset in itertools.combinations(values, size):
            parity = 0
            for bit in subset:
                parity ^= bit
            total += (-1) ** (size + 1) * parity
    return total


def exponent_bookkeeping_error(v: ArrayLike) -> float:
    """Max residual of ``V^x V^y V^{-(x^y)} = V^{2xy}`` over ``Z_2^2``."""
    v = as_matrix(v)
    error = 0.0
    for x, y in itertools.product((0, 1), repeat=2):
        lhs = (
            np.linalg.matrix_power(v, x)
            @ np.linalg.matrix_power(v, y)
            @ np.linalg.matrix_power(v, -(x ^ y))
        )
        error = max(error, max_norm(lhs - np.linalg.matrix_power(v, 2 * x * y)))
    return error


def unitary_root(u: ArrayLike, degree: int, tol: float = PREDICATE_TOL) -> ComplexMatrix:
    """Principal root ``V`` with ``V^degree = u`` of a 2x2 unitary.

    The complex Schur form of a normal matrix is diagonal, so
    ``u = Z diag(e^{i theta}) Z^dagger`` and ``V = Z diag(e^{i theta / degree}) Z^dagger``
    with ``theta`` in ``(-pi, pi]``; eigenvalue -1 takes ``theta = pi``.

    Raises:
        CircuitError: If ``u`` is not a 2x2 unitary or ``degree`` is not 2 or 4.
    """
    u = as_matrix(u)
    if u.shape != (2, 2) or not is_unitary(u, tol):
        raise CircuitError("roots are taken of 2x2 unitaries only")
    if degree not in (2, 4):
        raise CircuitError(f"degree must be 2 or 4, got {degree}")
    triangular, vectors = schur(u, output="complex")
    phases = np.angle(np.diag(triangular))
    phases = np.where(phases <= -np.pi + _BRANCH_EPS, np.pi, phases)
    return (vectors * np.exp(1j * phases / degree)) @ vectors.conj().T


def controlled_u(t: int, u: ArrayLike) -> GateMatrix:
    """Direct ``C^{t-1}``-U: identity except ``u`` on the all-ones control block."""
    return GateMatrix(t=t, m=controlled_matrix(t, list(range(1, t)), t, u))


def controlled_x_equivalence(t: int) -> float:
    """Residual between ``C^{t-1}``-X and the repeated CNOT permutation."""
    return max_norm(controlled_u(t, SIGMA_1).m - repeated_cnot(t).m)


@dataclass(frozen=True)
class SynthesisReport:
    """Synthesized circuit with its direct reference and the distance between them."""

    circuit: QuantumCircuit
    reference: GateMatrix
    max_error: float
    gate_count: int

    def succeeded(self, tol: float) -> bool:
        """Return whether the circuit matches the reference within ``tol``."""
        return self.max_error <= tol


def _report(circuit: QuantumCircuit, u: ComplexMatrix) -> SynthesisReport:
    reference = controlled_u(circuit.t, u)
    error = max_norm(simulate(circuit).m - reference.m)
    logger.debug(f"C^{circuit.t - 1}-U synthesis: {len(circuit)} gates, error {error:.3e}")
    return SynthesisReport(
        circuit=circuit, reference=reference, max_error=error, gate_count=len(circuit)
    )


def ccu_circuit(v: ArrayLike) -> QuantumCircuit:
    """Five-gate C^2-U layout for a square root ``v`` of U on wires (1, 2 -> 3)."""
    v = as_matrix(v)
    vd = v.conj().T
    gates: tuple[Gate, ...] = (
        ControlledSingle(2, 3, v),
        WireCnot(1, 2),
        ControlledSingle(2, 3, vd),
        WireCnot(1, 2),
        ControlledSingle(1, 3, v),
    )
    return QuantumCircuit(t=3, gates=gates)


def cccu_circuit(v: ArrayLike) -> QuantumCircuit:
    """Seventeen-gate C^3-U layout for a fourth root ``v`` of U on wires (1, 2, 3 -> 4)."""
    v = as_matrix(v)
    vd = v.conj().T
    gates: tuple[Gate, ...] = (
        ControlledSingle(1, 4, v),
        ControlledSingle(2, 4, v),
        ControlledSingle(3, 4, v),
        WireCnot(1, 2),
        ControlledSingle(2, 4, vd),
        WireCnot(1, 2),
        WireCnot(1, 3),
        ControlledSingle(3, 4, vd),
        WireCnot(1, 3),
        WireCnot(2, 3),
        ControlledSingle(3, 4, vd),
        WireCnot(2, 3),
        WireCnot(1, 2),
        WireCnot(2, 3),
        ControlledSingle(3, 4, v),
        WireCnot(2, 3),
        WireCnot(1, 2),
    )
    return QuantumCircuit(t=4, gates=gates)


def synthesize_ccu(u: ArrayLike) -> SynthesisReport:
    """Synthesize C^2-U from ``V`` with ``V^2 = u`` and compare with the direct matrix."""
    u = as_matrix(u)
    return _report(ccu_circuit(unitary_root(u, 2)), u)


def synthesize_cccu(u: ArrayLike) -> SynthesisReport:
    """Synthesize C^3-U from ``V`` with ``V^4 = u`` and compare with the direct matrix."""
    u = as_matrix(u)
    return _report(cccu_circuit(unitary_root(u, 4)), u)


@dataclass(frozen=True)
class GateCountRow:
    """Gate count of the ``controls``-fold construction."""

    controls: int
    count: int
    controlled_roots: int


def gate_count_table(max_controls: int) -> list[GateCountRow]:
    """Gate counts of the implemented constructions up to ``max_controls``.

    ``controlled_roots`` is ``2^k - 1``, one controlled root per non-empty
    parity subset of the ``k`` controls.
    """
    if max_controls not in (2, 3):
        raise ValueError(f"max_controls must be 2 or 3, got {max_controls}")
    identity = np.eye(2, dtype=np.complex128)
    builders = {2: ccu_circuit, 3: cccu_circuit}
    rows = []
    for controls in range(2, max_controls + 1):
        circuit = builders[controls](identity)
        roots = sum(isinstance(gate, ControlledSingle) for gate in circuit.gates)
        rows.append(GateCountRow(controls=controls, count=len(circuit), controlled_roots=roots))
    return rows


__all__ = [
    "CircuitError",
    "ControlledSingle",
    "GateCountRow",
    "QuantumCircuit",
    "SynthesisReport",
    "WireCnot",
    "ccu_circuit",
    "cccu_circuit",
    "circuit_from_payload",
    "circuit_to_payload",
    "controlled_u",
    "controlled_x_equivalence",
    "embed",
    "exponent_bookkeeping_error",
    "gate_count_table",
    "mod2_identity_check",
    "signed_parity_sum",
    "simulate",
    "synthesize_cccu",
    "synthesize_ccu",
    "unitary_root",
]
