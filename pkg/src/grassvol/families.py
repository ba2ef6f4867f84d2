"""Built-in unitary families with closed-form ``W(lambda)``."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from common.utils import ComplexMatrix

from .gates import IDENTITY_2, SIGMA_1, SIGMA_2, SIGMA_3
from .holonomy import UnitaryFamily, VacuumFrame
from .linalg import PREDICATE_TOL, as_matrix, is_hermitian, kron, max_norm

logger = logging.getLogger(__name__)


class UnknownFamilyError(KeyError):
    """Raised when a family name is not registered."""


def constant_family(dim: int, param_dim: int) -> UnitaryFamily:
    """``W = 1`` everywhere; its connection and curvature vanish."""
    identity = np.eye(dim, dtype=np.complex128)
    return UnitaryFamily(
        param_dim=param_dim,
        dim=dim,
        evaluate=lambda point: identity,
        base_point=np.zeros(param_dim),
    )


def exponential_family(generators: Sequence[ArrayLike], tol: float = PREDICATE_TOL) -> UnitaryFamily:
    """``W(lambda) = exp(i sum_mu lambda_mu G_mu)`` for anticommuting involutions.

    With ``G_mu G_nu + G_nu G_mu = 2 delta_{mu nu}`` the exponent squares to
    ``r^2`` with ``r = |lambda|``, so ``W = cos r + i (sin r / r) sum lambda_mu G_mu``.

    Raises:
        ValueError: If the generators are not Hermitian, or fail the anticommutation relation.
    """
    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    dim = gens[0].shape[0]
    identity = np.eye(dim, dtype=np.complex128)
    for mu, g in enumerate(gens):
        if g.shape != (dim, dim) or not is_hermitian(g, tol):
            raise ValueError(f"generator {mu} is not a Hermitian {dim}x{dim} matrix")
        for nu, h in enumerate(gens[mu:], start=mu):
            expected = 2.0 * identity if mu == nu else 0.0
            if max_norm(g @ h + h @ g - expected) > tol:
                raise ValueError(f"generators {mu} and {nu} violate G_mu G_nu + G_nu G_mu = 2 delta")
    stacked = np.array(gens)

    def evaluate(point: np.ndarray) -> ComplexMatrix:
        r = float(np.linalg.norm(point))
        exponent = np.tensordot(point, stacked, axes=1)
        return np.cos(r) * identity + 1j * np.sinc(r / np.pi) * exponent

    return UnitaryFamily(
        param_dim=len(gens), dim=dim, evaluate=evaluate, base_point=np.zeros(len(gens))
    )


def rotation_family() -> UnitaryFamily:
    """Spin-1/2 cone family ``W(theta, phi) = e^{-i phi s3/2} e^{-i theta s2/2} e^{i phi s3/2}``.

    ``W |0)`` is the state ``cos(theta/2) |0) + e^{i phi} sin(theta/2) |1)``,
    with Berry connection ``A = i sin^2(theta/2) dphi``.
    """

    def evaluate(point: np.ndarray) -> ComplexMatrix:
        theta, phi = point
        outer = np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
        tilt = np.cos(theta / 2) * IDENTITY_2 - 1j * np.sin(theta / 2) * SIGMA_2
        return outer @ tilt @ outer.conj()

    return UnitaryFamily(param_dim=2, dim=2, evaluate=evaluate, base_point=np.zeros(2))


def rotation_rectangle_phase(theta: float) -> complex:
    """Holonomy of the rotation family on the rectangle of widths ``(theta, 2 pi)``.

    The loop encloses the cap of opening angle ``theta``, giving
    ``exp(i pi (1 - cos theta))``.
    """
    return complex(np.exp(1j * np.pi * (1.0 - np.cos(theta))))


@dataclass(frozen=True)
class FamilySpec:
    """Named family together with its vacuum frame and a sensible loop size."""

    name: str
    build: Callable[[], UnitaryFamily]
    frame: Callable[[], VacuumFrame]
    default_radius: float
    description: str


BUILTIN_FAMILIES: dict[str, FamilySpec] = {
    spec.name: spec
    for spec in (
        FamilySpec(
            name="rotation",
            build=rotation_family,
            frame=lambda: VacuumFrame.standard(2, 1),
            default_radius=0.5,
            description="spin-1/2 cone family on N=2, m=1 (abelian Berry phase)",
        ),
        FamilySpec(
            name="two-parameter-su2",
            build=lambda: exponential_family([SIGMA_1, SIGMA_2]),
            frame=lambda: VacuumFrame.standard(2, 1),
            default_radius=0.5,
            description="exp(i(l1 s1 + l2 s2)) on N=2, m=1",
        ),
        FamilySpec(
            name="degenerate-m2",
            build=lambda: exponential_family(
                [kron(SIGMA_1, SIGMA_1), kron(SIGMA_1, SIGMA_3), kron(SIGMA_2, IDENTITY_2)]
            ),
            frame=lambda: VacuumFrame.standard(4, 2),
            default_radius=0.5,
            description="three anticommuting Pauli strings on N=4, m=2 (non-abelian)",
        ),
    )
}


def get_family(name: str) -> FamilySpec:
    """Look up a built-in family by name.

    Raises:
        UnknownFamilyError: If ``name`` is not registered.
    """
    try:
        return BUILTIN_FAMILIES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_FAMILIES))
        raise UnknownFamilyError(f"unknown family {name!r}; choose one of: {known}") from None


__all__ = [
    "BUILTIN_FAMILIES",
    "FamilySpec",
    "UnknownFamilyError",
    "constant_family",
    "exponential_family",
    "get_family",
    "rotation_family",
    "rotation_rectangle_phase",
]
