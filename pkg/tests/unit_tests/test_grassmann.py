"""Unit tests for Grassmannian points, charts and volumes."""

import math

import numpy as np
import pytest

from common.basemodel import VolumeEstimate
from common.utils import haar_unitary, make_rng, random_complex, random_orthonormal
from grassvol import grassmann
from grassvol.linalg import is_projection, max_norm
from tests.test_data import TestSeeds, TestTolerances, TestVolumes


class TestGrassmannPoint:
    """Projection matrices of fixed rank."""

    def test_special_projection(self) -> None:
        """Test that E_k is the diagonal projection of rank k."""
        point = grassmann.special_projection(4, 2)
        assert np.array_equal(np.diag(point.p).real, [1.0, 1.0, 0.0, 0.0])

    def test_complement(self) -> None:
        """Test that 1 - P lands in the complementary Grassmannian."""
        point = grassmann.complement(grassmann.special_projection(3, 1))
        assert point.k == 2
        assert np.array_equal(np.diag(point.p).real, [0.0, 1.0, 1.0])

    def test_from_orthonormal_basis(self, rng) -> None:
        """Test that V V^dagger is a rank-k projection."""
        point = grassmann.point_from_basis(random_orthonormal(5, 2, rng))
        assert point.k == 2
        assert is_projection(point.p)

    def test_basis_change_gives_same_point(self, rng) -> None:
        """Test that V and V a span the same point for a unitary a."""
        v = random_orthonormal(5, 3, rng)
        rotated = v @ haar_unitary(3, rng)
        first, second = grassmann.point_from_basis(v), grassmann.point_from_basis(rotated)
        assert max_norm(first.p - second.p) <= TestTolerances.IDENTITY
        assert second.k == 3

    def test_non_orthonormal_basis_rejected(self) -> None:
        """Test that skewed columns are refused."""
        with pytest.raises(ValueError, match="orthonormal"):
            grassmann.point_from_basis(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rank_must_match_trace(self) -> None:
        """Test that the declared rank is checked against the trace."""
        with pytest.raises(ValueError, match="does not match rank"):
            grassmann.GrassmannPoint(n=2, k=2, p=np.diag([1.0, 0.0]))


class TestCharts:
    """Local coordinates around the coordinate projections."""

    def test_origin_maps_to_base(self) -> None:
        """Test that Z = 0 gives E_k."""
        chart = grassmann.OikeChart(n=4, k=2, z=np.zeros((2, 2)))
        assert max_norm(grassmann.chart_point(chart).p - grassmann.special_projection(4, 2).p) == 0.0

    def test_random_coordinates_give_projection(self, rng) -> None:
        """Test that any Z lands on a rank-k projection."""
        z = random_complex((3, 2), rng)
        point = grassmann.chart_point(grassmann.OikeChart(n=5, k=2, z=z))
        assert is_projection(point.p, TestTolerances.KERNEL)
        assert np.trace(point.p).real == pytest.approx(2.0)

    def test_projective_line_closed_form(self) -> None:
        """Test that k = 1, n = 2 gives (1, z)(1, z)^dagger / (1 + |z|^2)."""
        z = 0.3 - 0.4j
        point = grassmann.chart_point(grassmann.OikeChart(n=2, k=1, z=np.array([[z]])))
        v = np.array([1.0, z])
        expected = np.outer(v, v.conj()) / (1 + abs(z) ** 2)
        assert max_norm(point.p - expected) <= TestTolerances.LINALG

    def test_chart_count_and_bases(self) -> None:
        """Test that C(n, k) permutation charts are generated."""
        bases = list(grassmann.chart_bases(4, 2))
        assert len(bases) == grassmann.chart_count(2, 4) == 6
        for base in bases:
            assert max_norm(base.conj().T @ base - np.eye(4)) == 0.0

    def test_non_unitary_base_rejected(self) -> None:
        """Test that chart bases must be unitary."""
        with pytest.raises(ValueError, match="not unitary"):
            grassmann.OikeChart(n=2, k=1, z=np.zeros((1, 1)), base=2 * np.eye(2))


class TestDensity:
    """Volume density and symplectic metric."""

    @pytest.mark.parametrize("shape", [(1, 1), (2, 1), (2, 2), (3, 2)])
    def test_determinants_agree_over_random_coordinates(self, shape) -> None:
        """Test det(1 + Z^dagger Z) = det(1 + Z Z^dagger) for 200 random Z."""
        rng = make_rng(TestSeeds.DEFAULT, sum(shape))
        for _ in range(200):
            z = random_complex(shape, rng)
            assert grassmann.det_lambda(z) == pytest.approx(grassmann.det_m(z), rel=1e-12)

    @pytest.mark.parametrize("shape", [(1, 1), (2, 1), (2, 2), (3, 2)])
    def test_density_is_unitarily_invariant(self, shape, rng) -> None:
        """Test that Z -> u Z v leaves the density unchanged."""
        rows, k = shape
        for _ in range(20):
            z = 2.0 * random_complex(shape, rng)
            moved = haar_unitary(rows, rng) @ z @ haar_unitary(k, rng)
            assert grassmann.volume_density(moved, rows + k) == pytest.approx(
                grassmann.volume_density(z, rows + k), rel=1e-11
            )

    def test_density_at_origin(self) -> None:
        """Test that the density is 1 at Z = 0."""
        assert grassmann.volume_density(np.zeros((2, 2)), 4) == 1.0

    def test_metric_determinant_is_density(self, rng) -> None:
        """Test det(M^{-1} x Lambda^{-T}) against det(Lambda)^{-n}."""
        z = random_complex((2, 1), rng)
        metric_det = np.linalg.det(grassmann.symplectic_metric(z)).real
        assert metric_det == pytest.approx(grassmann.volume_density(z, 3), rel=1e-10)

    def test_shape_must_fit(self) -> None:
        """Test that the coordinate shape determines n."""
        with pytest.raises(ValueError):
            grassmann.volume_density(np.zeros((2, 2)), 5)


class TestClosedFormVolumes:
    """Sphere, unitary group and Grassmannian volumes."""

    @pytest.mark.parametrize(("k", "expected"), sorted(TestVolumes.SPHERE.items()))
    def test_sphere(self, k, expected) -> None:
        """Test Vol(S^{2k-1})."""
        assert grassmann.sphere_volume(k) == pytest.approx(expected, rel=1e-15)

    def test_unitary_two(self) -> None:
        """Test Vol(U(2)) = 4 pi^3."""
        assert grassmann.unitary_volume(2) == pytest.approx(TestVolumes.UNITARY_2, rel=1e-15)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_unitary_product_matches_closed_form(self, n) -> None:
        """Test the sphere product against the superfactorial formula."""
        assert grassmann.unitary_volume(n) == pytest.approx(
            grassmann.unitary_volume_closed_form(n), rel=1e-13
        )

    @pytest.mark.parametrize(("shape", "expected"), sorted(TestVolumes.GRASSMANN.items()))
    def test_grassmann_values(self, shape, expected) -> None:
        """Test the tabulated Grassmannian volumes."""
        k, n = shape
        assert grassmann.grassmann_volume(k, n) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_symmetry_is_exact(self, n) -> None:
        """Test Vol(G_{k,n}) = Vol(G_{n-k,n}) bit for bit."""
        for k in range(n + 1):
            assert grassmann.grassmann_volume(k, n) == grassmann.grassmann_volume(n - k, n)

    def test_flag_volume_of_two_blocks_is_grassmannian(self) -> None:
        """Test U(4)/(U(2) x U(2)) against Vol(G_{2,4})."""
        assert grassmann.flag_volume([2, 2]) == pytest.approx(
            grassmann.grassmann_volume(2, 4), rel=1e-13
        )

    def test_trivial_shapes(self) -> None:
        """Test the endpoint conventions."""
        assert grassmann.grassmann_volume(0, 3) == 1.0
        assert grassmann.grassmann_volume(3, 3) == 1.0
        assert grassmann.flag_volume([5]) == 1.0

    def test_invalid_shapes(self) -> None:
        """Test that impossible ranks are refused."""
        with pytest.raises(ValueError):
            grassmann.grassmann_volume(4, 3)
        with pytest.raises(ValueError):
            grassmann.flag_volume([2, 0])


class TestMonteCarlo:
    """Importance-sampled volume estimates."""

    def test_entrywise_projective_line_has_zero_variance(self) -> None:
        """Test that the entrywise law samples k = 1, n = 2 exactly."""
        estimate = grassmann.mc_volume(
            1, 2, samples=5_000, seed=TestSeeds.DEFAULT, chunk=1_000, law="entrywise"
        )
        assert estimate.mean == pytest.approx(math.pi, rel=1e-12)
        assert estimate.standard_error <= 1e-12
        assert estimate.samples == 5_000
        assert estimate.seed == TestSeeds.DEFAULT
        assert estimate.law == "entrywise"
        assert estimate.max_weight_share == pytest.approx(1 / 5_000, rel=1e-9)
        assert grassmann.z_score(estimate, math.pi) == 0.0

    def test_haar_relative_error_matches_ratio_variance(self) -> None:
        """Test that the projective line reports a coefficient of variation of 1/2."""
        samples = 20_000
        estimate = grassmann.mc_volume(1, 2, samples=samples, seed=TestSeeds.DEFAULT)
        assert estimate.law == "haar"
        assert estimate.standard_error * math.sqrt(samples) / estimate.mean == pytest.approx(
            0.5, rel=0.05
        )
        assert abs(grassmann.z_score(estimate, math.pi)) <= 4.0

    def test_haar_weights_are_bounded(self) -> None:
        """Test that no draw carries more than (4/e)/N of the projective line total."""
        samples = 20_000
        estimate = grassmann.mc_volume(1, 2, samples=samples, seed=TestSeeds.DEFAULT)
        assert estimate.max_weight_share * samples <= 1.6

    @pytest.mark.parametrize(("shape", "target"), sorted(TestVolumes.GRASSMANN.items()))
    def test_haar_estimate_near_closed_form(self, shape, target) -> None:
        """Test each tabulated shape at 20 000 draws."""
        k, n = shape
        estimate = grassmann.mc_volume(k, n, samples=20_000, seed=TestSeeds.DEFAULT, chunk=4_096)
        assert abs(grassmann.z_score(estimate, target)) <= 4.0
        assert abs(estimate.mean - target) / target <= 0.05

    def test_reproducible_for_same_seed(self) -> None:
        """Test that identical arguments give identical estimates."""
        first = grassmann.mc_volume(2, 4, samples=3_000, seed=TestSeeds.DEFAULT, chunk=512)
        second = grassmann.mc_volume(2, 4, samples=3_000, seed=TestSeeds.DEFAULT, chunk=512)
        assert first == second

    @pytest.mark.parametrize("law", ["haar", "entrywise"])
    def test_independent_of_worker_count(self, law) -> None:
        """Test that threading does not change the merged statistics."""
        serial = grassmann.mc_volume(
            1, 3, samples=10_000, seed=TestSeeds.DEFAULT, chunk=1_000, law=law
        )
        threaded = grassmann.mc_volume(
            1, 3, samples=10_000, seed=TestSeeds.DEFAULT, chunk=1_000, workers=4, law=law
        )
        assert serial == threaded

    def test_seed_changes_estimate(self) -> None:
        """Test that a different seed draws different samples."""
        first = grassmann.mc_volume(1, 3, samples=2_000, seed=TestSeeds.DEFAULT)
        second = grassmann.mc_volume(1, 3, samples=2_000, seed=TestSeeds.ALTERNATE)
        assert first.mean != second.mean

    def test_single_sample(self) -> None:
        """Test that one draw reports a zero standard error and owns the whole weight."""
        estimate = grassmann.mc_volume(1, 3, samples=1, seed=TestSeeds.DEFAULT)
        assert estimate.samples == 1
        assert estimate.standard_error == 0.0
        assert estimate.max_weight_share == 1.0

    def test_z_score_of_zero_error_miss(self) -> None:
        """Test that a zero standard error with a real deviation scores huge."""
        estimate = VolumeEstimate(mean=3.0, standard_error=0.0, samples=10, seed=0)
        assert grassmann.z_score(estimate, math.pi) < -1e300

    def test_invalid_rank(self) -> None:
        """Test that endpoint ranks are not sampled."""
        with pytest.raises(ValueError):
            grassmann.mc_volume(0, 3, samples=10, seed=1)

    def test_unknown_law(self) -> None:
        """Test that only the two sampling laws are accepted."""
        with pytest.raises(ValueError, match="law"):
            grassmann.mc_volume(1, 3, samples=10, seed=1, law="uniform")


class TestQuadrature:
    """Deterministic projective-space volume."""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_closed_form(self, n) -> None:
        """Test pi^{n-1} / (n-1)! at the default grid."""
        expected = grassmann.grassmann_volume(1, n)
        assert grassmann.projective_volume_quadrature(n, 64) == pytest.approx(expected, rel=1e-12)

    def test_midpoint_rule_converges_quadratically(self) -> None:
        """Test that doubling the grid quarters the midpoint error."""
        exact = grassmann.grassmann_volume(1, 4)
        coarse = abs(grassmann.projective_volume_quadrature(4, 16, nodes=1) - exact)
        fine = abs(grassmann.projective_volume_quadrature(4, 32, nodes=1) - exact)
        assert 3.5 <= coarse / fine <= 4.5

    def test_invalid_grid(self) -> None:
        """Test that a single panel is refused."""
        with pytest.raises(ValueError, match="grid"):
            grassmann.projective_volume_quadrature(3, 1)
