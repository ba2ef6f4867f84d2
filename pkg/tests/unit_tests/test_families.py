"""Unit tests for the built-in unitary families."""

import math

import numpy as np
import pytest

from grassvol import families, holonomy
from grassvol.gates import SIGMA_1, SIGMA_2, SIGMA_3
from grassvol.linalg import max_norm, unitarity_deviation
from tests.test_data import TestTolerances


class TestExponentialFamily:
    """exp(i sum lambda_mu G_mu) for anticommuting involutions."""

    def test_identity_at_origin(self) -> None:
        """Test W(0) = 1."""
        family = families.exponential_family([SIGMA_1, SIGMA_2, SIGMA_3])
        assert max_norm(family(np.zeros(3)) - np.eye(2)) == 0.0

    def test_matches_matrix_exponential(self) -> None:
        """Test the closed form against cos r + i sin r (n . G)."""
        family = families.exponential_family([SIGMA_1, SIGMA_3])
        point = np.array([0.3, -0.4])
        r = 0.5
        expected = math.cos(r) * np.eye(2) + 1j * math.sin(r) * (0.3 * SIGMA_1 - 0.4 * SIGMA_3) / r
        assert max_norm(family(point) - expected) <= 1e-14

    def test_unitary_everywhere(self, rng) -> None:
        """Test unitarity at random points."""
        family = families.get_family("degenerate-m2").build()
        for _ in range(5):
            w = family(rng.uniform(-2.0, 2.0, 3))
            assert unitarity_deviation(w) <= TestTolerances.IDENTITY

    def test_commuting_generators_rejected(self) -> None:
        """Test that generators must anticommute."""
        with pytest.raises(ValueError, match="violate"):
            families.exponential_family([SIGMA_1, SIGMA_1])

    def test_non_hermitian_generator_rejected(self) -> None:
        """Test that generators must be Hermitian."""
        with pytest.raises(ValueError, match="Hermitian"):
            families.exponential_family([1j * SIGMA_1])

    def test_empty_generators_rejected(self) -> None:
        """Test that at least one generator is needed."""
        with pytest.raises(ValueError):
            families.exponential_family([])


class TestRotationFamily:
    """Spin-1/2 cone family."""

    def test_moves_vacuum_to_bloch_state(self) -> None:
        """Test W|0) = cos(theta/2)|0) + e^{i phi} sin(theta/2)|1)."""
        family = families.rotation_family()
        theta, phi = 0.9, 1.7
        state = family([theta, phi])[:, 0]
        expected = [math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)]
        assert max_norm(state - expected) <= 1e-14

    @pytest.mark.parametrize(
        ("theta", "expected"), [(0.0, 1.0), (math.pi / 2, -1.0), (math.pi, 1.0)]
    )
    def test_rectangle_phase(self, theta, expected) -> None:
        """Test exp(i pi (1 - cos theta)) at special angles."""
        assert families.rotation_rectangle_phase(theta) == pytest.approx(expected, abs=1e-14)


class TestRegistry:
    """Built-in family lookup."""

    def test_names(self) -> None:
        """Test the registered family names."""
        assert sorted(families.BUILTIN_FAMILIES) == ["degenerate-m2", "rotation", "two-parameter-su2"]

    @pytest.mark.parametrize("name", sorted(families.BUILTIN_FAMILIES))
    def test_frames_fit_families(self, name) -> None:
        """Test that each frame lives in its family's dimension."""
        spec = families.get_family(name)
        family, vac = spec.build(), spec.frame()
        assert family.dim == vac.dim
        assert spec.default_radius > 0

    def test_degenerate_family_spans_su2(self) -> None:
        """Test that the degenerate family's curvature closes on su(2)."""
        spec = families.get_family("degenerate-m2")
        family, vac = spec.build(), spec.frame()
        samples = [
            f
            for point in ([0.3, 0.2, -0.1], [-0.5, 0.4, 0.6])
            for f in holonomy.curvature_at(family, vac, point).values()
        ]
        probe = holonomy.holonomy_span_probe(samples, tol=1e-6)
        assert probe.spanned_dimension == 3
        assert not probe.irreducible

    def test_unknown_name(self) -> None:
        """Test that lookup of an unknown family fails with a KeyError."""
        with pytest.raises(KeyError):
            families.get_family("nope")
