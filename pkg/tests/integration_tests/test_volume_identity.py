"""Full-size Monte-Carlo and holonomy acceptance runs."""

import numpy as np
import pytest

from grassvol import grassmann, holonomy
from grassvol.checks import MC_TARGETS, scalar_line_integral
from grassvol.families import get_family
from tests.test_data import TestSeeds, TestTolerances


@pytest.mark.slow
class TestVolumeIdentity:
    """Importance-sampled volumes at one million draws."""

    @pytest.mark.parametrize(("shape", "target"), sorted(MC_TARGETS.items()))
    def test_estimate_within_three_standard_errors(self, shape, target) -> None:
        """Test |mean - Vol| <= 3 stderr and relative error <= 1%."""
        k, n = shape
        estimate = grassmann.mc_volume(k, n, samples=1_000_000, seed=TestSeeds.DEFAULT, workers=4)
        assert abs(estimate.mean - target) / target <= 0.01
        assert abs(grassmann.z_score(estimate, target)) <= 3.0

    @pytest.mark.parametrize(("shape", "target"), sorted(MC_TARGETS.items()))
    def test_three_sigma_band_covers_across_seeds(self, shape, target) -> None:
        """Test that at least 99 of 100 seeds land within 3 stderr at 1e5 draws."""
        k, n = shape
        misses = []
        for seed in range(100):
            estimate = grassmann.mc_volume(k, n, samples=100_000, seed=seed, workers=4)
            assert estimate.max_weight_share * estimate.samples <= 20.0
            if abs(grassmann.z_score(estimate, target)) > 3.0:
                misses.append(seed)
        assert len(misses) <= 1, misses


@pytest.mark.slow
class TestAbelianHolonomy:
    """Path-ordered holonomy against the scalar line integral."""

    def test_ten_thousand_steps(self) -> None:
        """Test Gamma = exp(closed line integral of A) at 1e-6."""
        spec = get_family("two-parameter-su2")
        family, vac = spec.build(), spec.frame()
        loop = holonomy.circle_loop(family.base_point, spec.default_radius, 10_000)
        gamma = holonomy.holonomy(family, vac, loop, workers=4)
        expected = np.exp(
            scalar_line_integral(family, vac, spec.default_radius, holonomy.DEFAULT_STEP)
        )
        assert abs(gamma[0, 0] - expected) <= TestTolerances.HOLONOMY
