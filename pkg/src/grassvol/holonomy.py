"""Adiabatic connection, curvature and holonomy of a unitary family.

A family ``W(lambda)`` of ``N x N`` unitaries with ``W(lambda_0) = 1`` moves an
``m``-dimensional vacuum frame ``V``. The connection is
``A = V^dagger W^{-1} dW V`` (one ``m x m`` anti-Hermitian matrix per parameter
direction), the curvature ``F = dA + A ^ A``, and the holonomy of a closed
loop is the path-ordered exponential of ``A`` along it.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from common.utils import ComplexMatrix

from .grassmann import GrassmannPoint
from .linalg import (
    PREDICATE_TOL,
    ShapeError,
    as_matrix,
    is_unitary,
    max_norm,
    unitarity_deviation,
    unitary_exp,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-5
DEFAULT_OUTER_STEP = 1e-3
DEFAULT_DEPTH = 3


class OpenLoopError(ValueError):
    """Raised when a loop does not close on the family's base point."""


@dataclass(frozen=True)
class VacuumFrame:
    """Orthonormal ``N x m`` frame spanning the degenerate vacuum."""

    frame: ComplexMatrix
    tol: float = field(default=PREDICATE_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        frame = as_matrix(self.frame)
        object.__setattr__(self, "frame", frame)
        if frame.shape[1] > frame.shape[0] or frame.shape[1] < 1:
            raise ShapeError(f"frame shape {frame.shape} is not N x m with 1 <= m <= N")
        if max_norm(frame.conj().T @ frame - np.eye(frame.shape[1])) > self.tol:
            raise ValueError("vacuum frame columns are not orthonormal")

    @property
    def dim(self) -> int:
        """Truncation dimension ``N``."""
        return self.frame.shape[0]

    @property
    def m(self) -> int:
        """Degeneracy ``m``."""
        return self.frame.shape[1]

    @classmethod
    def standard(cls, dim: int, m: int) -> VacuumFrame:
        """Frame of the first ``m`` basis vectors."""
        return cls(frame=np.eye(dim, m, dtype=np.complex128))

    def projection(self) -> ComplexMatrix:
        """Return ``V V^dagger``."""
        return self.frame @ self.frame.conj().T


@dataclass(frozen=True)
class UnitaryFamily:
    """Map ``lambda -> W(lambda)`` with ``W(base_point) = 1``."""

    param_dim: int
    dim: int
    evaluate: Callable[[np.ndarray], ComplexMatrix]
    base_point: np.ndarray
    tol: float = field(default=PREDICATE_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        base = np.asarray(self.base_point, dtype=float).reshape(self.param_dim)
        object.__setattr__(self, "base_point", base)
        at_base = self(base)
        if max_norm(at_base - np.eye(self.dim)) > self.tol:
            raise ValueError("family must evaluate to the identity at its base point")

    def __call__(self, point: ArrayLike) -> ComplexMatrix:
        """Evaluate ``W`` and check its shape and unitarity."""
        point = np.asarray(point, dtype=float)
        w = as_matrix(self.evaluate(point))
        if w.shape != (self.dim, self.dim):
            raise ShapeError(f"family returned shape {w.shape}, expected {self.dim}x{self.dim}")
        if not is_unitary(w, self.tol):
            raise ValueError(f"W(lambda) is not unitary at lambda={point.tolist()}")
        return w


@dataclass(frozen=True)
class ParameterLoop:
    """Discretized closed path ``lambda_0, ..., lambda_K = lambda_0``."""

    points: np.ndarray

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or len(points) < 2:
            raise ValueError("a loop needs at least two points in a 2-D array")
        if not np.array_equal(points[0], points[-1]):
            raise OpenLoopError("loop is not closed: first and last points differ")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def steps(self) -> int:
        """Number of segments."""
        return len(self.points) - 1

    @property
    def start(self) -> np.ndarray:
        """Base point of the loop."""
        return self.points[0]


@dataclass(frozen=True)
class ConnectionSample:
    """Connection components ``A_mu`` at one parameter point."""

    point: np.ndarray
    components: tuple[ComplexMatrix, ...]

    @property
    def residue(self) -> float:
        """Largest anti-Hermiticity defect ``max|A + A^dagger|``."""
        return max((max_norm(a + a.conj().T) for a in self.components), default=0.0)

    def contract(self, direction: ArrayLike) -> ComplexMatrix:
        """Return ``sum_mu A_mu d_mu``."""
        direction = np.asarray(direction, dtype=float)
        return sum(
            (a * d for a, d in zip(self.components, direction)),
            np.zeros_like(self.components[0]),
        )


def constant_loop(base: ArrayLike, steps: int) -> ParameterLoop:
    """Loop that never leaves ``base``."""
    base = np.asarray(base, dtype=float)
    return ParameterLoop(points=np.tile(base, (steps + 1, 1)))


def circle_loop(
    base: ArrayLike, radius: float, steps: int, axes: tuple[int, int] = (0, 1)
) -> ParameterLoop:
    """Counter-clockwise circle through ``base`` in the plane of ``axes``.

    The centre sits at ``base - radius * e_a``.
    """
    base = np.asarray(base, dtype=float)
    if steps < 2:
        raise ValueError(f"a loop needs at least 2 steps, got {steps}")
    a, b = axes
    angles = 2.0 * np.pi * np.arange(steps + 1) / steps
    points = np.tile(base, (steps + 1, 1))
    points[:, a] += radius * (np.cos(angles) - 1.0)
    points[:, b] += radius * np.sin(angles)
    points[-1] = points[0]
    return ParameterLoop(points=points)


def rectangle_loop(
    base: ArrayLike,
    widths: tuple[float, float],
    steps: int,
    axes: tuple[int, int] = (0, 1),
) -> ParameterLoop:
    """Rectangle ``base -> +w_a -> +w_b -> -w_a -> -w_b`` in the plane of ``axes``.

    Segments are shared among the four sides in proportion to their length.
    """
    base = np.asarray(base, dtype=float)
    a, b = axes
    wa, wb = widths
    if steps < 4:
        raise ValueError(f"a rectangle needs at least 4 steps, got {steps}")
    corners = [base.copy() for _ in range(5)]
    corners[1][a] += wa
    corners[2][a] += wa
    corners[2][b] += wb
    corners[3][b] += wb

    lengths = np.array([abs(wa), abs(wb), abs(wa), abs(wb)])
    if lengths.sum() == 0:
        return constant_loop(base, steps)
    shares = np.maximum(1, np.floor(steps * lengths / lengths.sum()).astype(int))
    shares[np.argmax(lengths)] += steps - shares.sum()

    points = [corners[0]]
    for side, count in enumerate(shares):
        start, stop = corners[side], corners[side + 1]
        for j in range(1, count + 1):
            points.append(start + (stop - start) * (j / count))
    points[-1] = corners[0]
    return ParameterLoop(points=np.array(points))


def reverse_loop(loop: ParameterLoop) -> ParameterLoop:
    """Same image traversed backwards."""
    return ParameterLoop(points=loop.points[::-1].copy())


def concatenate_loops(first: ParameterLoop, second: ParameterLoop) -> ParameterLoop:
    """Traverse ``first`` and then ``second``; both must share a base point."""
    if not np.array_equal(first.start, second.start):
        raise OpenLoopError("loops start at different points")
    return ParameterLoop(points=np.vstack([first.points, second.points[1:]]))


def subdivide_loop(loop: ParameterLoop, factor: int) -> ParameterLoop:
    """Split every segment into ``factor`` equal pieces without changing the image."""
    if factor < 1:
        raise ValueError(f"factor must be positive, got {factor}")
    points = loop.points
    fractions = np.arange(factor) / factor
    pieces = points[:-1, None, :] + fractions[None, :, None] * np.diff(points, axis=0)[:, None, :]
    refined = np.vstack([pieces.reshape(-1, points.shape[1]), points[-1:]])
    return ParameterLoop(points=refined)


def _check_frame(family: UnitaryFamily, vac: VacuumFrame) -> None:
    if family.dim != vac.dim:
        raise ShapeError(f"family acts on dimension {family.dim}, frame lives in {vac.dim}")


def projector_at(family: UnitaryFamily, vac: VacuumFrame, point: ArrayLike) -> GrassmannPoint:
    """Return ``P(lambda) = W(lambda) V V^dagger W(lambda)^{-1}``."""
    _check_frame(family, vac)
    w = family(point)
    return GrassmannPoint(n=vac.dim, k=vac.m, p=w @ vac.projection() @ w.conj().T)


def connection_at(
    family: UnitaryFamily, vac: VacuumFrame, point: ArrayLike, h: float = DEFAULT_STEP
) -> ConnectionSample:
    """Central-difference connection ``A_mu = V^dagger W^dagger dW/dlambda_mu V``."""
    if h <= 0:
        raise ValueError(f"finite-difference step must be positive, got {h}")
    _check_frame(family, vac)
    point = np.asarray(point, dtype=float)
    left = (family(point) @ vac.frame).conj().T
    components = []
    for mu in range(family.param_dim):
        step = np.zeros(family.param_dim)
        step[mu] = h
        derivative = (family(point + step) - family(point - step)) / (2.0 * h)
        components.append(left @ derivative @ vac.frame)
    return ConnectionSample(point=point, components=tuple(components))


def curvature_component(
    family: UnitaryFamily,
    vac: VacuumFrame,
    point: ArrayLike,
    mu: int,
    nu: int,
    h: float = DEFAULT_STEP,
    outer: float = DEFAULT_OUTER_STEP,
) -> ComplexMatrix:
    """Return ``F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]``.

    The outer derivatives are central differences of :func:`connection_at`
    with step ``outer``.
    """
    point = np.asarray(point, dtype=float)

    def shifted(direction: int, sign: float) -> ConnectionSample:
        offset = np.zeros(family.param_dim)
        offset[direction] = sign * outer
        return connection_at(family, vac, point + offset, h)

    d_mu_a_nu = (shifted(mu, 1.0).components[nu] - shifted(mu, -1.0).components[nu]) / (2 * outer)
    d_nu_a_mu = (shifted(nu, 1.0).components[mu] - shifted(nu, -1.0).components[mu]) / (2 * outer)
    here = connection_at(family, vac, point, h).components
    bracket = here[mu] @ here[nu] - here[nu] @ here[mu]
    return d_mu_a_nu - d_nu_a_mu + bracket


def curvature_at(
    family: UnitaryFamily,
    vac: VacuumFrame,
    point: ArrayLike,
    h: float = DEFAULT_STEP,
    outer: float = DEFAULT_OUTER_STEP,
) -> dict[tuple[int, int], ComplexMatrix]:
    """Curvature components for every direction pair ``mu < nu``."""
    if family.param_dim < 2:
        raise ValueError("curvature needs at least two parameters")
    return {
        (mu, nu): curvature_component(family, vac, point, mu, nu, h, outer)
        for mu in range(family.param_dim)
        for nu in range(mu + 1, family.param_dim)
    }


@dataclass(frozen=True)
class HolonomyResult:
    """Path-ordered holonomy and its discretization diagnostics.

    ``gamma`` multiplies one exponential per segment and is unitary to
    rounding. ``euler`` is the first-order product of ``1 + A dlambda``;
    its unitarity deviation shrinks like ``1 / steps``.
    """

    gamma: ComplexMatrix
    euler: ComplexMatrix
    steps: int
    max_residue: float

    @property
    def unitarity_deviation(self) -> float:
        """Unitarity defect of ``gamma``."""
        return unitarity_deviation(self.gamma)

    @property
    def euler_deviation(self) -> float:
        """Unitarity defect of the first-order product."""
        return unitarity_deviation(self.euler)


def _segment_generators(
    family: UnitaryFamily, vac: VacuumFrame, loop: ParameterLoop, h: float, workers: int
) -> list[tuple[ComplexMatrix, float]]:
    points = loop.points
    midpoints = (points[:-1] + points[1:]) / 2.0
    deltas = np.diff(points, axis=0)

    def segment(k: int) -> tuple[ComplexMatrix, float]:
        sample = connection_at(family, vac, midpoints[k], h)
        return sample.contract(deltas[k]), sample.residue

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(segment, range(loop.steps)))
    return [segment(k) for k in range(loop.steps)]


def holonomy_run(
    family: UnitaryFamily,
    vac: VacuumFrame,
    loop: ParameterLoop,
    h: float = DEFAULT_STEP,
    workers: int = 1,
) -> HolonomyResult:
    """Midpoint product integration of the connection around ``loop``.

    Segment ``k`` contributes ``exp(X_k)`` with ``X_k`` the anti-Hermitian part of
    ``sum_mu A_mu(midpoint) dlambda_mu``. Earlier segments act first, so they
    stand rightmost in the product.

    Raises:
        OpenLoopError: If the loop does not start at the family's base point.
    """
    _check_frame(family, vac)
    if loop.steps < 2:
        raise ValueError(f"holonomy needs at least 2 steps, got {loop.steps}")
    if not np.allclose(loop.start, family.base_point, rtol=0.0, atol=1e-12):
        raise OpenLoopError("loop does not start at the family's base point")

    m = vac.m
    gamma = np.eye(m, dtype=np.complex128)
    euler = np.eye(m, dtype=np.complex128)
    max_residue = 0.0
    for generator, residue in _segment_generators(family, vac, loop, h, workers):
        anti = (generator - generator.conj().T) / 2.0
        gamma = unitary_exp(-1j * anti, 1.0) @ gamma
        euler = (np.eye(m) + generator) @ euler
        max_residue = max(max_residue, residue)
    logger.debug(f"holonomy over {loop.steps} segments, max residue {max_residue:.3e}")
    return HolonomyResult(gamma=gamma, euler=euler, steps=loop.steps, max_residue=max_residue)


def holonomy(
    family: UnitaryFamily,
    vac: VacuumFrame,
    loop: ParameterLoop,
    h: float = DEFAULT_STEP,
    workers: int = 1,
) -> ComplexMatrix:
    """Return the ``m x m`` holonomy ``Gamma`` of ``loop``."""
    return holonomy_run(family, vac, loop, h, workers).gamma


def apply_holonomy(gamma: ArrayLike, x: ArrayLike) -> np.ndarray:
    """Transport a fiber vector: ``x -> Gamma x``."""
    gamma = as_matrix(gamma)
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != gamma.shape[1]:
        raise ShapeError(f"fiber vector of length {x.shape[0]} does not fit {gamma.shape}")
    return gamma @ x


@dataclass(frozen=True)
class ConvergenceRow:
    """Diagnostics of one refinement level."""

    steps: int
    unitarity_deviation: float
    euler_deviation: float
    distance_to_finest: float


def convergence_table(
    family: UnitaryFamily,
    vac: VacuumFrame,
    build_loop: Callable[[int], ParameterLoop],
    steps: int,
    doublings: int = 3,
    h: float = DEFAULT_STEP,
    workers: int = 1,
) -> list[ConvergenceRow]:
    """Holonomy at ``steps, 2 steps, ..., 2^doublings steps`` against the finest level."""
    results = [
        holonomy_run(family, vac, build_loop(steps * 2**level), h, workers)
        for level in range(doublings + 1)
    ]
    finest = results[-1].gamma
    return [
        ConvergenceRow(
            steps=result.steps,
            unitarity_deviation=result.unitarity_deviation,
            euler_deviation=result.euler_deviation,
            distance_to_finest=max_norm(result.gamma - finest),
        )
        for result in results
    ]


@dataclass(frozen=True)
class SpanProbe:
    """Real dimension of the Lie algebra generated by curvature samples."""

    spanned_dimension: int
    irreducible: bool


def _as_real(a: ComplexMatrix) -> np.ndarray:
    return np.concatenate([a.real.ravel(), a.imag.ravel()])


def _independent(candidates: Sequence[ComplexMatrix], tol: float) -> list[ComplexMatrix]:
    basis: list[ComplexMatrix] = []
    rank = 0
    for candidate in candidates:
        trial = np.array([_as_real(b) for b in [*basis, candidate]])
        new_rank = np.linalg.matrix_rank(trial, tol=tol)
        if new_rank > rank:
            basis.append(candidate)
            rank = new_rank
    return basis


def holonomy_span_probe(
    samples: Sequence[ArrayLike], depth: int = DEFAULT_DEPTH, tol: float = 1e-8
) -> SpanProbe:
    """Close curvature samples under commutators and measure the span.

    The span is irreducible when it reaches ``m^2``, the real dimension of
    ``u(m)``.
    """
    matrices = [as_matrix(s) for s in samples]
    if not matrices:
        raise ValueError("need at least one curvature sample")
    m = matrices[0].shape[0]
    if any(a.shape != (m, m) for a in matrices):
        raise ShapeError("curvature samples must share one m x m shape")

    scale = max(max_norm(a) for a in matrices)
    if scale == 0.0:
        return SpanProbe(spanned_dimension=0, irreducible=False)
    rank_tol = tol * scale

    basis = _independent([a / scale for a in matrices], rank_tol / scale)
    for _ in range(depth):
        brackets = [a @ b - b @ a for a in basis for b in basis]
        grown = _independent([*basis, *brackets], rank_tol / scale)
        if len(grown) == len(basis):
            break
        basis = grown
    return SpanProbe(spanned_dimension=len(basis), irreducible=len(basis) == m * m)


def stiefel_action_invariance(vac: VacuumFrame, a: ArrayLike) -> float:
    """Residual of ``pi(V a) = pi(V)`` for ``a`` in ``U(m)``."""
    a = as_matrix(a)
    if a.shape != (vac.m, vac.m) or not is_unitary(a):
        raise ValueError("right action requires an m x m unitary")
    moved = VacuumFrame(frame=vac.frame @ a)
    return max_norm(moved.projection() - vac.projection())


def fiber_contains(point: GrassmannPoint, v: ArrayLike, tol: float = PREDICATE_TOL) -> bool:
    """Return whether ``P v = v``, the fiber condition over ``P``."""
    v = np.asarray(v, dtype=np.complex128)
    return max_norm(point.p @ v - v) <= tol


__all__ = [
    "ConnectionSample",
    "ConvergenceRow",
    "HolonomyResult",
    "OpenLoopError",
    "ParameterLoop",
    "SpanProbe",
    "UnitaryFamily",
    "VacuumFrame",
    "apply_holonomy",
    "circle_loop",
    "concatenate_loops",
    "connection_at",
    "constant_loop",
    "convergence_table",
    "curvature_at",
    "curvature_component",
    "fiber_contains",
    "holonomy",
    "holonomy_run",
    "holonomy_span_probe",
    "projector_at",
    "rectangle_loop",
    "reverse_loop",
    "stiefel_action_invariance",
    "subdivide_loop",
]
