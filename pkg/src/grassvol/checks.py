"""Registry of verification checks and the suite runner.

Each check is a function of the :class:`~common.context.Context` returning a
:class:`CheckOutcome`. Checks register themselves with the :func:`check`
decorator under a dotted id; :func:`run_suite` executes a selection and
returns one :class:`~common.basemodel.VerificationRecord` per id, sorted by id.
"""

from __future__ import annotations

import logging
import math
import sys
import time
import zlib
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from common.basemodel import VerificationRecord
from common.context import Context
from common.utils import haar_unitary, make_rng, random_complex, random_hermitian, random_orthonormal

from . import families, flags, gates, grassmann, holonomy, linalg, pauli, synthesis

logger = logging.getLogger(__name__)

_LARGEST_ERROR = sys.float_info.max

MC_TARGETS: dict[tuple[int, int], float] = {
    (1, 2): math.pi,
    (1, 3): math.pi**2 / 2,
    (2, 3): math.pi**2 / 2,
    (2, 4): math.pi**4 / 12,
}


class UnknownCheckError(ValueError):
    """Raised when a selection names an unregistered check."""


@dataclass(frozen=True)
class CheckOutcome:
    """Largest residual of a check and whether it met its threshold."""

    max_error: float
    passed: bool
    seed: int | None = None


CheckFn = Callable[[Context], CheckOutcome]


@dataclass(frozen=True)
class Check:
    """A registered check, where it comes from and the identity it verifies."""

    check_id: str
    anchor: str
    identity: str
    fn: CheckFn


CHECKS: dict[str, Check] = {}


def check(check_id: str, anchor: str, identity: str) -> Callable[[CheckFn], CheckFn]:
    """Register the decorated function under ``check_id``.

    Args:
        check_id: Dotted id whose first component names the module group.
        anchor: Equation or section the check reproduces, reported as ``paper_anchor``.
        identity: The formula being verified, for logs and listings.
    """

    def register(fn: CheckFn) -> CheckFn:
        if check_id in CHECKS:
            raise ValueError(f"duplicate check id {check_id!r}")
        CHECKS[check_id] = Check(check_id=check_id, anchor=anchor, identity=identity, fn=fn)
        return fn

    return register


def rng_for(check_id: str, ctx: Context) -> np.random.Generator:
    """Random stream owned by one check, fixed by ``ctx.seed`` and the id."""
    return make_rng(ctx.seed, zlib.crc32(check_id.encode()))


def _within(error: float, tol: float, seed: int | None = None) -> CheckOutcome:
    return CheckOutcome(max_error=float(error), passed=bool(error <= tol), seed=seed)


# dense-complex-linalg


@check("linalg.kron.mixed-product", "Eq. (2.13)", "(A⊗B)(C⊗D) = AC⊗BD")
def _kron_mixed_product(ctx: Context) -> CheckOutcome:
    rng = rng_for("linalg.kron.mixed-product", ctx)
    error = 0.0
    for _ in range(ctx.trials):
        a, b, c, d = (random_complex((3, 3), rng) for _ in range(4))
        lhs = linalg.kron(a, b) @ linalg.kron(c, d)
        error = max(error, linalg.max_norm(lhs - linalg.kron(a @ c, b @ d)))
    return _within(error, ctx.linalg_tol, ctx.seed)


@check("linalg.det.multiplicative", "Eq. (2.14)", "det(AB) = det A det B")
def _det_multiplicative(ctx: Context) -> CheckOutcome:
    rng = rng_for("linalg.det.multiplicative", ctx)
    error = 0.0
    for _ in range(ctx.trials):
        a, b = random_complex((5, 5), rng), random_complex((5, 5), rng)
        product = linalg.det(a) * linalg.det(b)
        error = max(error, abs(linalg.det(a @ b) - product) / max(1.0, abs(product)))
    return _within(error, ctx.linalg_tol, ctx.seed)


@check("linalg.eigen.jacobi", "Eq. (A.6)", "A = U diag(λ) U†")
def _jacobi(ctx: Context) -> CheckOutcome:
    rng = rng_for("linalg.eigen.jacobi", ctx)
    error = 0.0
    for trial in range(ctx.trials):
        a = random_hermitian(2 + trial % 7, rng)
        eig = linalg.hermitian_eigen(a, ctx.linalg_tol)
        u = eig.eigenvectors
        error = max(
            error,
            linalg.max_norm(eig.reconstruct() - a),
            linalg.max_norm(u.conj().T @ u - np.eye(len(u))),
        )
    return _within(error, ctx.linalg_tol, ctx.seed)


@check("linalg.exp.unitary", "Eq. (A.1)", "exp(iH) unitary, exp(2πiP) = 1")
def _exp_unitary(ctx: Context) -> CheckOutcome:
    rng = rng_for("linalg.exp.unitary", ctx)
    error = 0.0
    for trial in range(ctx.trials):
        n = 2 + trial % 5
        error = max(error, linalg.unitarity_deviation(linalg.unitary_exp(random_hermitian(n, rng))))
        v = random_orthonormal(n, 1 + trial % (n - 1), rng)
        p = v @ v.conj().T
        error = max(error, linalg.max_norm(linalg.unitary_exp(p, 2 * math.pi) - np.eye(n)))
    return _within(error, ctx.linalg_tol, ctx.seed)


# grassmann-geometry


@check("grassmann.chart.projection", "Eq. (2.8)", "X E_k X⁻¹ is a rank-k projection")
def _chart_projection(ctx: Context) -> CheckOutcome:
    rng = rng_for("grassmann.chart.projection", ctx)
    error = 0.0
    for trial in range(ctx.trials):
        n = 3 + trial % 4
        k = 1 + trial % (n - 1)
        chart = grassmann.OikeChart(n=n, k=k, z=random_complex((n - k, k), rng))
        p = grassmann.chart_point(chart).p
        error = max(
            error,
            linalg.max_norm(p @ p - p),
            linalg.max_norm(p - p.conj().T),
            abs(np.trace(p).real - k),
        )
    return _within(error, ctx.predicate_tol, ctx.seed)


@check("grassmann.density.symplectic", "Eq. (2.20)", "det(M⁻¹⊗(Λ⁻¹)ᵀ) = det(Λ)^(-n)")
def _symplectic_density(ctx: Context) -> CheckOutcome:
    rng = rng_for("grassmann.density.symplectic", ctx)
    error = 0.0
    for trial in range(ctx.trials):
        n = 3 + trial % 3
        k = 1 + trial % (n - 1)
        z = random_complex((n - k, k), rng)
        density = grassmann.volume_density(z, n)
        metric_det = linalg.det(grassmann.symplectic_metric(z)).real
        error = max(
            error,
            abs(metric_det - density) / density,
            abs(grassmann.det_lambda(z) - grassmann.det_m(z)) / grassmann.det_lambda(z),
        )
    return _within(error, ctx.linalg_tol, ctx.seed)


@check("grassmann.volume.unitary", "Eq. (3.4)", "Vol(U(n)) = Vol(S¹)···Vol(S^(2n-1))")
def _unitary_volume(ctx: Context) -> CheckOutcome:
    mismatch = 0.0
    relative = 0.0
    for n in range(1, 9):
        product = 1.0
        for j in range(1, n + 1):
            product *= grassmann.sphere_volume(j)
        mismatch = max(mismatch, abs(grassmann.unitary_volume(n) - product))
        closed = grassmann.unitary_volume_closed_form(n)
        relative = max(relative, abs(closed - product) / product)
    return CheckOutcome(
        max_error=max(mismatch, relative), passed=mismatch == 0.0 and relative <= 1e-13
    )


@check("grassmann.volume.symmetry", "Eq. (3.5)", "Vol(G_k,n) = Vol(G_n-k,n)")
def _volume_symmetry(ctx: Context) -> CheckOutcome:
    mismatch = 0.0
    for n in range(1, 9):
        for k in range(n + 1):
            swapped = grassmann.grassmann_volume(n - k, n)
            mismatch = max(mismatch, abs(grassmann.grassmann_volume(k, n) - swapped))
    relative = max(
        abs(grassmann.grassmann_volume(k, n) - target) / target
        for (k, n), target in MC_TARGETS.items()
    )
    return CheckOutcome(
        max_error=max(mismatch, relative), passed=mismatch == 0.0 and relative <= 1e-14
    )


def _mc_check(k: int, n: int) -> CheckFn:
    def run(ctx: Context) -> CheckOutcome:
        target = grassmann.grassmann_volume(k, n)
        estimate = grassmann.mc_volume(
            k,
            n,
            ctx.mc_samples,
            ctx.seed,
            workers=ctx.workers,
            chunk=ctx.mc_chunk,
            law=ctx.mc_law,
        )
        relative = abs(estimate.mean - target) / target
        z = abs(grassmann.z_score(estimate, target))
        logger.info(
            f"mc_volume(k={k}, n={n}): relative error {relative:.2e}, |z| {z:.2f}, "
            f"max weight share {estimate.max_weight_share:.2e}"
        )
        return CheckOutcome(max_error=relative, passed=relative <= 0.01 and z <= 3.0, seed=ctx.seed)

    return run


for _rank, _dim in MC_TARGETS:
    check(f"grassmann.mc.k{_rank}n{_dim}", "Eq. (4.1)", "Vol(G_k,n) = ∫ det(1+Z†Z)^(-n) dZ")(
        _mc_check(_rank, _dim)
    )


@check("grassmann.quadrature.k1", "§4, after Eq. (4.3)", "Vol(G_1,n) = π^(n-1)/(n-1)!")
def _projective_quadrature(ctx: Context) -> CheckOutcome:
    error = 0.0
    for n in range(2, 7):
        target = math.pi ** (n - 1) / math.factorial(n - 1)
        error = max(error, abs(grassmann.projective_volume_quadrature(n, 64) - target) / target)
    return _within(error, 1e-8)


# flag-spectra


def _kernel_element(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    values = rng.integers(-3, 4, size=n)
    u = haar_unitary(n, rng)
    return (u * values) @ u.conj().T, values


@check("flag.classify.random", "Eq. (A.6)", "X = Σ n_j P_j, P_k P_l = δ_kl P_l, Σ P_j = 1")
def _classify_random(ctx: Context) -> CheckOutcome:
    rng = rng_for("flag.classify.random", ctx)
    error = 0.0
    correct = True
    for trial in range(ctx.trials):
        x, values = _kernel_element(rng, 2 + trial % 5)
        decomposition = flags.spectral_decompose(x, ctx.kernel_tol)
        expected = sorted(zip(*np.unique(values, return_counts=True)))
        correct &= list(decomposition.spectral_type.pairs) == [(int(v), int(c)) for v, c in expected]
        error = max(
            error,
            decomposition.orthogonality_error(),
            decomposition.completeness_error(),
            linalg.max_norm(decomposition.reconstruct() - x),
        )
    return CheckOutcome(max_error=error, passed=correct and error <= ctx.predicate_tol, seed=ctx.seed)


@check("flag.reject.perturbed", "Eq. (A.2)", "exp(2πiX) ≠ 1 for non-integer spectra")
def _reject_perturbed(ctx: Context) -> CheckOutcome:
    rng = rng_for("flag.reject.perturbed", ctx)
    accepted = 0
    for trial in range(ctx.trials):
        x, _ = _kernel_element(rng, 2 + trial % 5)
        shift = 0.05 + 0.4 * rng.random()
        accepted += flags.in_kernel(x + shift * np.eye(len(x)), ctx.kernel_tol)
    return CheckOutcome(max_error=float(accepted), passed=accepted == 0, seed=ctx.seed)


# qubit-gate-algebra


def _over_wires(ctx: Context, fn: Callable[[int], float], start: int = 1) -> float:
    return max((fn(t) for t in range(start, ctx.suite_qubits + 1)), default=0.0)


@check("gates.walsh.t2", "Eq. (5.13)", "W⊗W = (1/2)[(-1)^(i·j)]")
def _walsh_t2(ctx: Context) -> CheckOutcome:
    return _within(linalg.max_norm(gates.walsh_power(2).m - gates.walsh_table(2)), 0.0)


@check("gates.walsh.tensor-power", "Eq. (5.16)", "W^⊗t = n^(-1/2)[(-1)^(i·j)]")
def _walsh_tensor_power(ctx: Context) -> CheckOutcome:
    error = _over_wires(ctx, lambda t: linalg.max_norm(gates.walsh_power(t).m - gates.walsh_table(t)))
    return _within(error, 1e-11)


@check("gates.walsh.sums", "Eq. (5.18)", "Σ_j (i|W^⊗t|j) = √n δ_i0")
def _walsh_sums(ctx: Context) -> CheckOutcome:
    def residual(t: int) -> float:
        n = 2**t
        expected = [math.sqrt(n)] + [0.0] * (n - 1)
        rows = [abs(gates.row_sum(t, i) - e) for i, e in enumerate(expected)]
        columns = [abs(gates.column_sum(t, j) - e) for j, e in enumerate(expected)]
        return max(rows + columns)

    return _within(_over_wires(ctx, residual), 1e-11)


@check("gates.characters", "Eq. (5.21)", "χ_i(j⊕k) = χ_i(j)χ_i(k), Σ_j χ_i χ_i' = n δ")
def _characters(ctx: Context) -> CheckOutcome:
    def residual(t: int) -> float:
        return float(
            gates.character_multiplicativity_violations(t) + gates.character_orthogonality_error(t)
        )

    return _within(_over_wires(ctx, residual), 0.0)


@check("gates.sigma.relations", "Eq. (5.8)", "σ₂ = iσ₁σ₃, σ₁ = Wσ₃W⁻¹")
def _sigma_relations(ctx: Context) -> CheckOutcome:
    w = gates.HADAMARD
    error = max(
        gates.sigma2_relation_error(),
        linalg.max_norm(w @ gates.SIGMA_3 @ w.conj().T - gates.SIGMA_1),
    )
    return _within(error, 1e-11)


@check("gates.cnot.uniton", "Eq. (5.32)", "CNOT = 1 - 2P, P = D E₁ D⁻¹")
def _cnot_uniton(ctx: Context) -> CheckOutcome:
    result = gates.cnot_uniton_decomposition()
    return _within(max(result.reconstruction_error, result.diagonalization_error), 1e-11)


@check("gates.cnot.repeated", "Eq. (5.31)", "(1⊗W) C^(t-1)NOT (1⊗W) = 1 - 2|n-1)(n-1|")
def _repeated_cnot(ctx: Context) -> CheckOutcome:
    return _within(_over_wires(ctx, gates.repeated_cnot_conjugation_error, start=2), 1e-11)


@check("gates.flip.conjugator", "Eq. (5.37)", "U_i F₁ U_i = 1 - 2|i)(i|")
def _flip_conjugator(ctx: Context) -> CheckOutcome:
    return _within(_over_wires(ctx, gates.flip_conjugator_error), 1e-11)


@check("gates.f.recursion", "Eq. (5.38)", "F_k (U_k F₁ U_k) = F_(k+1)")
def _f_recursion(ctx: Context) -> CheckOutcome:
    return _within(_over_wires(ctx, gates.f_recursion_error), 1e-11)


@check("gates.f1.repeated-cnot", "Eq. (5.43)", "F₁ = (X⊗σ₁W) C^(t-1)NOT (X⊗Wσ₁)")
def _f1_repeated_cnot(ctx: Context) -> CheckOutcome:
    def residual(t: int) -> float:
        return linalg.max_norm(gates.f1_from_repeated_cnot(t).m - gates.f_matrix(t, 1).m)

    return _within(_over_wires(ctx, residual, start=2), 1e-11)


@check("gates.grover", "Eq. (5.41)", "1 - 2|s)(s| = W^⊗t F₁ W^⊗t")
def _grover(ctx: Context) -> CheckOutcome:
    return _within(_over_wires(ctx, gates.grover_error), 1e-11)


@check("gates.uniton.full", "Eq. (5.11)", "Π (1 - 2P_j) unitary")
def _full_uniton(ctx: Context) -> CheckOutcome:
    rng = rng_for("gates.uniton.full", ctx)
    error = 0.0
    for trial in range(ctx.trials):
        n = 2 + trial % 5
        u = haar_unitary(n, rng)
        ladder = [grassmann.point_from_basis(u[:, :j]) for j in range(1, n)]
        error = max(error, linalg.unitarity_deviation(gates.full_uniton(ladder)))
    return _within(error, 1e-11, ctx.seed)


# generalized-pauli


def _over_dims(ctx: Context, fn: Callable[[int], float]) -> float:
    return max(fn(n) for n in range(2, ctx.max_pauli_dim + 1))


@check("pauli.clock-shift", "Eq. (B.3)", "Σ^n = 1, Σ† = Σ^(n-1), Σ₃Σ₁ = σΣ₁Σ₃")
def _clock_shift(ctx: Context) -> CheckOutcome:
    return _within(_over_dims(ctx, pauli.clock_shift_error), 1e-12)


@check("pauli.weyl", "Eq. (B.3)", "Σ₃^a Σ₁^b = σ^(ab) Σ₁^b Σ₃^a")
def _weyl(ctx: Context) -> CheckOutcome:
    return _within(_over_dims(ctx, pauli.weyl_commutation_error), 1e-12)


@check("pauli.roots", "Appendix B", "1 + σ + ... + σ^(n-1) = 0")
def _roots(ctx: Context) -> CheckOutcome:
    return _within(_over_dims(ctx, pauli.root_sum_error), 1e-12)


@check("pauli.vandermonde", "Eq. (B.4)", "WW† = 1")
def _vandermonde(ctx: Context) -> CheckOutcome:
    return _within(_over_dims(ctx, pauli.vandermonde_error), 1e-12)


@check("pauli.diagonalize", "Eq. (B.6)", "WΣ₃W† = Σ₁")
def _diagonalize(ctx: Context) -> CheckOutcome:
    return _within(_over_dims(ctx, pauli.diagonalize_shift_error), 1e-12)


@check("pauli.worked-three", "Eq. (B.6)", "W for n = 3")
def _worked_three(ctx: Context) -> CheckOutcome:
    return _within(pauli.worked_three_error(), 1e-12)


# controlled-gate-synthesis


@check("synth.mod2", "Eq. (C.1)", "x + y - x⊕y = 2xy")
def _mod2(ctx: Context) -> CheckOutcome:
    rng = rng_for("synth.mod2", ctx)
    identities = synthesis.mod2_identity_check(2) and synthesis.mod2_identity_check(3)
    error = 0.0
    for _ in range(ctx.trials):
        v = synthesis.unitary_root(haar_unitary(2, rng), 2)
        error = max(error, synthesis.exponent_bookkeeping_error(v))
    return CheckOutcome(max_error=error, passed=identities and error <= 1e-11, seed=ctx.seed)


@check("synth.ccu.random", "Eq. (C.4)", "C²-U from V² = U")
def _ccu_random(ctx: Context) -> CheckOutcome:
    rng = rng_for("synth.ccu.random", ctx)
    error = max(synthesis.synthesize_ccu(haar_unitary(2, rng)).max_error for _ in range(ctx.trials))
    return _within(error, 1e-10, ctx.seed)


@check("synth.cccu.random", "Eq. (C.6)", "C³-U from V⁴ = U")
def _cccu_random(ctx: Context) -> CheckOutcome:
    rng = rng_for("synth.cccu.random", ctx)
    error = max(synthesis.synthesize_cccu(haar_unitary(2, rng)).max_error for _ in range(ctx.trials))
    return _within(error, 1e-9, ctx.seed)


@check("synth.toffoli", "Appendix C", "C²-σ₁ = Toffoli, C³-σ₁ = C³-NOT")
def _toffoli(ctx: Context) -> CheckOutcome:
    toffoli = synthesis.synthesize_ccu(gates.SIGMA_1).circuit
    cccnot = synthesis.synthesize_cccu(gates.SIGMA_1).circuit
    error = max(
        linalg.max_norm(synthesis.simulate(toffoli).m - gates.repeated_cnot(3).m),
        linalg.max_norm(synthesis.simulate(cccnot).m - gates.repeated_cnot(4).m),
        synthesis.controlled_x_equivalence(3),
        synthesis.controlled_x_equivalence(4),
    )
    return _within(error, 1e-10)


@check("synth.gate-count", "Appendix C", "5 gates for C²-U, 17 for C³-U")
def _gate_count(ctx: Context) -> CheckOutcome:
    counts = {row.controls: row.count for row in synthesis.gate_count_table(3)}
    mismatch = abs(counts[2] - 5) + abs(counts[3] - 17)
    return _within(float(mismatch), 0.0)


# holonomy-engine


def _built_in(name: str) -> tuple[holonomy.UnitaryFamily, holonomy.VacuumFrame]:
    spec = families.get_family(name)
    return spec.build(), spec.frame()


@check("holonomy.trivial", "Eq. (6.19)", "Γ(constant loop) = 1")
def _trivial(ctx: Context) -> CheckOutcome:
    error = 0.0
    for name in families.BUILTIN_FAMILIES:
        family, vac = _built_in(name)
        loop = holonomy.constant_loop(family.base_point, 16)
        gamma = holonomy.holonomy(family, vac, loop, ctx.fd_step)
        error = max(error, linalg.max_norm(gamma - np.eye(vac.m)))
    return _within(error, 1e-12)


def scalar_line_integral(
    family: holonomy.UnitaryFamily,
    vac: holonomy.VacuumFrame,
    radius: float,
    h: float,
    axes: tuple[int, int] = (0, 1),
    panels: int = 32,
    nodes: int = 16,
) -> complex:
    """Integrate an ``m = 1`` connection around :func:`holonomy.circle_loop`.

    Uses a fixed composite Gauss-Legendre rule of ``panels`` panels with
    ``nodes`` points each; the integrand is smooth and periodic, so the rule
    is accurate down to the finite-difference noise of the connection.
    """
    a, b = axes
    base = family.base_point

    def integrand(t: float) -> complex:
        point = base.copy()
        point[a] += radius * (math.cos(t) - 1.0)
        point[b] += radius * math.sin(t)
        velocity = np.zeros_like(base)
        velocity[a] = -radius * math.sin(t)
        velocity[b] = radius * math.cos(t)
        return complex(holonomy.connection_at(family, vac, point, h).contract(velocity)[0, 0])

    x, w = leggauss(nodes)
    edges = np.linspace(0.0, 2 * math.pi, panels + 1)
    half = np.diff(edges)[:, None] / 2.0
    times = (edges[:-1, None] + edges[1:, None]) / 2.0 + half * x
    values = np.array([integrand(float(t)) for t in times.ravel()]).reshape(times.shape)
    return complex(np.sum(half * w * values))


@check("holonomy.abelian.line-integral", "Eq. (6.19)", "Γ = exp(∮A) for m = 1")
def _abelian_line_integral(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("two-parameter-su2")
    radius = families.get_family("two-parameter-su2").default_radius
    loop = holonomy.circle_loop(family.base_point, radius, 10_000)
    gamma = holonomy.holonomy(family, vac, loop, ctx.fd_step, ctx.workers)
    expected = np.exp(scalar_line_integral(family, vac, radius, ctx.fd_step))
    return _within(abs(gamma[0, 0] - expected), 1e-6)


@check("holonomy.abelian.closed-form", "Eq. (6.19)", "Γ = exp(iπ(1 - cos θ))")
def _abelian_closed_form(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("rotation")
    theta = math.pi / 3
    loop = holonomy.rectangle_loop(family.base_point, (theta, 2 * math.pi), ctx.holonomy_steps)
    gamma = holonomy.holonomy(family, vac, loop, ctx.fd_step, ctx.workers)
    return _within(abs(gamma[0, 0] - families.rotation_rectangle_phase(theta)), 1e-6)


@check("holonomy.euler.halving", "Eq. (6.19)", "first-order product deviation halves per doubling")
def _euler_halving(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("degenerate-m2")
    radius = families.get_family("degenerate-m2").default_radius
    rows = holonomy.convergence_table(
        family,
        vac,
        lambda steps: holonomy.circle_loop(family.base_point, radius, steps, axes=(0, 2)),
        steps=64,
        doublings=3,
        h=ctx.fd_step,
    )
    ratios = [a.euler_deviation / b.euler_deviation for a, b in zip(rows, rows[1:])]
    return CheckOutcome(
        max_error=max(row.unitarity_deviation for row in rows),
        passed=all(ratio >= 1.8 for ratio in ratios),
    )


@check("holonomy.reversal", "Eq. (6.19)", "Γ(γ⁻¹) Γ(γ) = 1")
def _reversal(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("degenerate-m2")
    loop = holonomy.circle_loop(family.base_point, 0.5, ctx.holonomy_steps, axes=(0, 2))
    forward = holonomy.holonomy(family, vac, loop, ctx.fd_step, ctx.workers)
    backward = holonomy.holonomy(family, vac, holonomy.reverse_loop(loop), ctx.fd_step, ctx.workers)
    return _within(linalg.max_norm(backward @ forward - np.eye(vac.m)), 1e-8)


@check("holonomy.concatenation", "Eq. (6.19)", "Γ(γ₂∘γ₁) = Γ(γ₂) Γ(γ₁)")
def _concatenation(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("degenerate-m2")
    first = holonomy.circle_loop(family.base_point, 0.5, ctx.holonomy_steps // 4, axes=(0, 1))
    second = holonomy.circle_loop(family.base_point, 0.4, ctx.holonomy_steps // 4, axes=(1, 2))
    joined = holonomy.holonomy(family, vac, holonomy.concatenate_loops(first, second), ctx.fd_step)
    product = holonomy.holonomy(family, vac, second, ctx.fd_step) @ holonomy.holonomy(
        family, vac, first, ctx.fd_step
    )
    return _within(linalg.max_norm(joined - product), 1e-10)


@check("holonomy.subdivision", "Eq. (6.19)", "Γ independent of the loop's sampling")
def _subdivision(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("degenerate-m2")
    loop = holonomy.circle_loop(family.base_point, 0.5, ctx.holonomy_steps, axes=(0, 2))
    coarse = holonomy.holonomy(family, vac, loop, ctx.fd_step, ctx.workers)
    fine = holonomy.holonomy(family, vac, holonomy.subdivide_loop(loop, 2), ctx.fd_step, ctx.workers)
    # midpoint products differ by O(segment^2) between resolutions
    segment = float(np.max(np.linalg.norm(np.diff(loop.points, axis=0), axis=1)))
    return _within(linalg.max_norm(coarse - fine), max(1e-6, 10.0 * segment**2))


@check("holonomy.projector.kernel", "Eq. (6.13)", "P(λ) = W V V† W⁻¹, exp(2πiP) = 1")
def _projector_kernel(ctx: Context) -> CheckOutcome:
    rng = rng_for("holonomy.projector.kernel", ctx)
    error = 0.0
    for name in families.BUILTIN_FAMILIES:
        family, vac = _built_in(name)
        at_base = holonomy.projector_at(family, vac, family.base_point).p
        error = max(error, linalg.max_norm(at_base - vac.projection()))
        for _ in range(max(1, ctx.trials // 10)):
            point = family.base_point + rng.uniform(-1.0, 1.0, family.param_dim)
            p = holonomy.projector_at(family, vac, point).p
            error = max(error, linalg.max_norm(linalg.unitary_exp(p, 2 * math.pi) - np.eye(vac.dim)))
    return _within(error, ctx.predicate_tol, ctx.seed)


@check("holonomy.connection.anti-hermitian", "Eq. (6.17)", "A = V†W⁻¹dW V anti-Hermitian")
def _connection_anti_hermitian(ctx: Context) -> CheckOutcome:
    rng = rng_for("holonomy.connection.anti-hermitian", ctx)
    residue = 0.0
    for name in families.BUILTIN_FAMILIES:
        family, vac = _built_in(name)
        for _ in range(max(1, ctx.trials // 10)):
            point = family.base_point + rng.uniform(-1.0, 1.0, family.param_dim)
            residue = max(residue, holonomy.connection_at(family, vac, point, ctx.fd_step).residue)
    return _within(residue, max(1e-8, 10 * ctx.fd_step**2), ctx.seed)


@check("holonomy.curvature.antisymmetry", "Eq. (6.18)", "F_μν = -F_νμ")
def _curvature_antisymmetry(ctx: Context) -> CheckOutcome:
    family, vac = _built_in("degenerate-m2")
    point = np.array([0.3, -0.2, 0.4])
    error = 0.0
    for mu, nu in ((0, 1), (0, 2), (1, 2)):
        forward = holonomy.curvature_component(family, vac, point, mu, nu, ctx.fd_step)
        backward = holonomy.curvature_component(family, vac, point, nu, mu, ctx.fd_step)
        error = max(error, linalg.max_norm(forward + backward))
    return _within(error, 1e-6)


@check("holonomy.span.probe", "§6", "Hol(A) = U(m) iff the curvature algebra is u(m)")
def _span_probe(ctx: Context) -> CheckOutcome:
    points = [np.array([0.3, 0.2]), np.array([0.7, -0.4])]
    family, vac = _built_in("rotation")
    abelian = holonomy.holonomy_span_probe(
        [f for p in points for f in holonomy.curvature_at(family, vac, p, ctx.fd_step).values()],
        tol=1e-6,
    )
    family, vac = _built_in("degenerate-m2")
    samples = [
        f
        for p in (np.array([0.3, 0.2, -0.1]), np.array([-0.5, 0.4, 0.6]))
        for f in holonomy.curvature_at(family, vac, p, ctx.fd_step).values()
    ]
    non_abelian = holonomy.holonomy_span_probe(samples, tol=1e-6)
    passed = abelian.spanned_dimension == 1 and abelian.irreducible and non_abelian.spanned_dimension == 3
    return CheckOutcome(max_error=0.0, passed=passed)


def resolve_selection(selection: Iterable[str]) -> list[str]:
    """Expand a selection into registered ids.

    An entry is either an exact id or a dotted prefix such as ``gates``
    selecting every id below it. ``all`` selects the whole registry.

    Raises:
        ValueError: If the selection is empty.
        UnknownCheckError: If an entry matches nothing.
    """
    entries = list(selection)
    if not entries:
        raise ValueError("check selection is empty")
    chosen: set[str] = set()
    for entry in entries:
        if entry == "all":
            chosen.update(CHECKS)
            continue
        matches = [cid for cid in CHECKS if cid == entry or cid.startswith(entry + ".")]
        if not matches:
            raise UnknownCheckError(f"unknown check id {entry!r}")
        chosen.update(matches)
    return sorted(chosen)


def _execute(item: Check, ctx: Context) -> VerificationRecord:
    start = time.perf_counter()
    try:
        outcome = item.fn(ctx)
    except Exception:
        logger.exception(f"check {item.check_id} raised")
        outcome = CheckOutcome(max_error=math.inf, passed=False, seed=ctx.seed)
    elapsed = (time.perf_counter() - start) * 1e3 if ctx.record_timings else 0.0

    error = float(outcome.max_error)
    passed = bool(outcome.passed)
    if not math.isfinite(error):
        error, passed = _LARGEST_ERROR, False
    logger.info(
        f"{item.check_id} [{item.identity}]: {'pass' if passed else 'fail'} (max error {error:.3e})"
    )
    return VerificationRecord(
        check_id=item.check_id,
        paper_anchor=item.anchor,
        status="pass" if passed else "fail",
        max_error=error,
        runtime_ms=elapsed,
        seed=outcome.seed,
    )


def run_suite(selection: Iterable[str], ctx: Context | None = None) -> list[VerificationRecord]:
    """Run the selected checks and return their records sorted by id.

    Checks run on up to ``ctx.workers`` threads. A check that raises is
    recorded as failed.
    """
    ctx = ctx or Context()
    ids = resolve_selection(selection)
    logger.info(f"running {len(ids)} checks on {ctx.workers} worker(s)")
    items = [CHECKS[cid] for cid in ids]
    if ctx.workers > 1:
        with ThreadPoolExecutor(max_workers=ctx.workers) as pool:
            records = list(pool.map(lambda item: _execute(item, ctx), items))
    else:
        records = [_execute(item, ctx) for item in items]
    return sorted(records, key=lambda record: record.check_id)


def all_passed(records: Iterable[VerificationRecord]) -> bool:
    """Return whether every record passed."""
    return all(record.status == "pass" for record in records)


__all__ = [
    "CHECKS",
    "MC_TARGETS",
    "Check",
    "CheckOutcome",
    "UnknownCheckError",
    "all_passed",
    "check",
    "resolve_selection",
    "rng_for",
    "run_suite",
    "scalar_line_integral",
]
