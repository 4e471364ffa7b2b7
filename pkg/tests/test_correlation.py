"""
Tests for pair counts and the pair-correlation statistics.
"""

import numpy as np
import pytest

from app.core import validate_point_set
from app.correlation import (
    pair_count,
    ppc_statistic,
    s_grid_gap_ratio,
    smoothed_pair_statistic,
    target_value,
    weak_ppc_statistic,
)
from app.errors import InputError
from app.generators import generate
from app.models import Algorithm, Family, GeneratorSpec, NormKind


class TestPairCount:
    """pair_count() examples and invariants."""

    def test_grid_1d(self, grid_1d_10):
        """Test GRID d=1 N=10 at radius 0.15 gives 20 ordered pairs."""
        assert pair_count(grid_1d_10, 0.15) == 20

    def test_grid_2d(self, grid_2d_4):
        """Test GRID 2x2 at radius 0.6 gives 8 ordered pairs."""
        assert pair_count(grid_2d_4, 0.6) == 8

    def test_single_point(self):
        """Test a single point has no pairs."""
        assert pair_count(validate_point_set([[0.3, 0.3]]), 0.4) == 0

    @pytest.mark.parametrize("radius", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_radius(self, grid_1d_10, radius):
        """Test non-positive and non-finite radii are rejected."""
        with pytest.raises(InputError):
            pair_count(grid_1d_10, radius)

    def test_radius_beyond_cap_counts_everything(self, grid_2d_4):
        """Test a radius past the cap counts every ordered pair."""
        assert pair_count(grid_2d_4, 5.0) == 4 * 3

    def test_coincident_points_are_pairs(self, origin_cluster):
        """Test identical points pair with each other but not themselves."""
        assert pair_count(origin_cluster, 1e-9) == 16 * 15

    @pytest.mark.parametrize("dim,n,radius", [(1, 3000, 0.002), (2, 2000, 0.03), (3, 1500, 0.12), (2, 300, 0.4)])
    @pytest.mark.parametrize("norm", list(NormKind))
    def test_cells_match_brute_force(self, make_random, dim, n, radius, norm):
        """Test CELLS and BRUTE agree on fixed random cases."""
        ps = make_random(n, dim, seed=dim * 31 + n)
        assert pair_count(ps, radius, norm, Algorithm.CELLS) == pair_count(ps, radius, norm, Algorithm.BRUTE)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_cells_match_brute_force_across_sets(self, make_random, seed):
        """Test CELLS and BRUTE agree over random dimensions, sizes and radii under both norms."""
        rng = np.random.default_rng(1000 + seed)
        dim = int(rng.integers(1, 4))
        n = int(rng.integers(2, 2001))
        radius = float(np.exp(rng.uniform(np.log(1e-3), np.log(0.45))))
        ps = make_random(n, dim, seed=seed)
        for norm in NormKind:
            cells = pair_count(ps, radius, norm, Algorithm.CELLS)
            assert cells == pair_count(ps, radius, norm, Algorithm.BRUTE)

    @pytest.mark.parametrize("dim,side", [(1, 10), (1, 60), (2, 12), (3, 6)])
    @pytest.mark.parametrize("norm", list(NormKind))
    def test_grid_aligned_radii(self, dim, side, norm):
        """Test CELLS and BRUTE agree when the radius equals a grid spacing exactly."""
        ps = generate(GeneratorSpec(family=Family.GRID, dim=dim, count=side ** dim))
        for radius in (1 / side, 2 / side, np.sqrt(2.0) / side, 1 / 3, 1 / 4):
            cells = pair_count(ps, radius, norm, Algorithm.CELLS)
            assert cells == pair_count(ps, radius, norm, Algorithm.BRUTE)
            assert cells >= pair_count(ps, radius * (1 - 1e-9), norm, Algorithm.BRUTE)

    def test_chunking_does_not_change_counts(self, make_random, tiny_blocks):
        """Test tiny work blocks give the same count."""
        ps = make_random(800, 2, seed=4)
        assert pair_count(ps, 0.05, algorithm=Algorithm.CELLS) == pair_count(ps, 0.05, algorithm=Algorithm.BRUTE)

    def test_monotone_in_radius(self, make_random):
        """Test counts grow with the radius."""
        ps = make_random(1000, 2, seed=12)
        counts = [pair_count(ps, r) for r in (0.01, 0.02, 0.04, 0.08, 0.16)]
        assert counts == sorted(counts)

    def test_sup_norm_counts_at_least_euclidean(self, make_random):
        """Test the sup-norm ball contains the Euclidean ball."""
        ps = make_random(1000, 3, seed=13)
        assert pair_count(ps, 0.1, NormKind.SUP) >= pair_count(ps, 0.1, NormKind.EUCLIDEAN)

    def test_permutation_invariance(self, make_random, rng):
        """Test relabeling points keeps the count."""
        ps = make_random(600, 2, seed=14)
        shuffled = validate_point_set(ps.points[rng.permutation(ps.n)])
        assert pair_count(shuffled, 0.05) == pair_count(ps, 0.05)

    def test_translation_invariance(self, make_random, rng):
        """Test a common shift mod 1 keeps the count."""
        ps = make_random(600, 2, seed=15)
        shifted = validate_point_set((ps.points + rng.random(2)) % 1.0)
        assert pair_count(shifted, 0.05) == pair_count(ps, 0.05)


class TestPPCStatistic:
    """ppc_statistic() and weak_ppc_statistic()."""

    def test_grid_values(self, grid_1d_10):
        """Test ppc_statistic fields for GRID d=1 N=10 at s=1.5."""
        result = ppc_statistic(grid_1d_10, 1.5)
        assert result.count == 20
        assert result.normalized == pytest.approx(2.0)
        assert result.target == pytest.approx(3.0)
        assert result.radius == pytest.approx(0.15)

    def test_random_is_poissonian(self, make_random):
        """Test random points in d=1 reach 2s at s=1."""
        result = ppc_statistic(make_random(100_000, 1, seed=2024), 1.0)
        assert abs(result.normalized - 2.0) <= 0.1

    def test_random_2d_sup_norm(self, make_random):
        """Test random points in d=2 reach (2s)^2 under the sup norm."""
        result = ppc_statistic(make_random(20_000, 2, seed=77), 1.0, NormKind.SUP)
        assert result.target == pytest.approx(4.0)
        assert result.normalized == pytest.approx(4.0, abs=0.25)

    def test_kronecker_has_no_close_pairs(self, kronecker_golden):
        """Test {nφ} has no pair within 0.3/N."""
        result = ppc_statistic(kronecker_golden, 0.3)
        assert result.count == 0
        assert result.normalized == 0.0

    def test_bad_s(self, grid_1d_10):
        """Test s = 0 is rejected."""
        with pytest.raises(InputError):
            ppc_statistic(grid_1d_10, 0.0)

    def test_weak_alpha_one_matches(self, make_random):
        """Test weak statistic at α=1 equals ppc_statistic."""
        ps = make_random(2000, 1, seed=5)
        assert weak_ppc_statistic(ps, 0.7, 1.0) == ppc_statistic(ps, 0.7)

    def test_weak_random(self, make_random):
        """Test weak statistic of random points is near 2 at α=1/2."""
        result = weak_ppc_statistic(make_random(10_000, 1, seed=99), 1.0, 0.5)
        assert result.normalized == pytest.approx(2.0, abs=0.15)

    def test_weak_single_point(self):
        """Test a single point gives a zero weak statistic."""
        assert weak_ppc_statistic(validate_point_set([[0.5]]), 1.0, 0.5).normalized == 0.0

    def test_weak_requires_dimension_one(self, grid_2d_4):
        """Test weak statistic rejects d > 1."""
        with pytest.raises(InputError, match="d = 1"):
            weak_ppc_statistic(grid_2d_4, 1.0, 0.5)

    @pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
    def test_weak_alpha_range(self, grid_1d_10, alpha):
        """Test α outside (0, 1] is rejected."""
        with pytest.raises(InputError):
            weak_ppc_statistic(grid_1d_10, 1.0, alpha)

    def test_targets(self):
        """Test Poissonian targets for both norms."""
        assert target_value(1, 2.0, NormKind.EUCLIDEAN) == pytest.approx(4.0)
        assert target_value(2, 1.0, NormKind.EUCLIDEAN) == pytest.approx(np.pi)
        assert target_value(3, 0.5, NormKind.SUP) == 1.0


class TestSmoothedStatistic:
    """smoothed_pair_statistic()."""

    def test_identical_points(self, origin_cluster):
        """Test coincident points give f(0) (N-1)/N."""
        delta = 0.1
        result = smoothed_pair_statistic(origin_cluster, delta)
        assert result.value == pytest.approx(15 / (16 * 2 * delta), rel=1e-14)

    def test_single_point(self):
        """Test a single point gives zero."""
        assert smoothed_pair_statistic(validate_point_set([[0.1]]), 0.05).value == 0.0

    def test_random_limit(self, make_random):
        """Test random points at δ=20/N approach 1."""
        n = 50_000
        result = smoothed_pair_statistic(make_random(n, 1, seed=8), 20 / n)
        assert result.value == pytest.approx(1.0, abs=0.1)

    @pytest.mark.parametrize("delta", [0.0, 0.25, -0.1])
    def test_delta_range(self, grid_1d_10, delta):
        """Test δ outside (0, 1/4) is rejected."""
        with pytest.raises(InputError):
            smoothed_pair_statistic(grid_1d_10, delta)

    def test_never_exceeds_coincident_value(self, make_random):
        """Test the value stays between 0 and the coincident ceiling."""
        ps = make_random(500, 2, seed=3)
        delta = 0.05
        ceiling = (ps.n - 1) / (ps.n * np.pi * delta ** 2)
        assert 0.0 <= smoothed_pair_statistic(ps, delta).value <= ceiling

    def test_algorithms_agree(self, make_random):
        """Test CELLS and BRUTE agree on the smoothed statistic."""
        ps = make_random(1500, 3, seed=21)
        cells = smoothed_pair_statistic(ps, 0.04, Algorithm.CELLS).value
        brute = smoothed_pair_statistic(ps, 0.04, Algorithm.BRUTE).value
        assert cells == pytest.approx(brute, rel=1e-12)


class TestGapRatio:
    """s_grid_gap_ratio()."""

    def test_uniform_grid(self):
        """Test an evenly spaced s grid."""
        assert s_grid_gap_ratio([0.5 * k for k in range(1, 11)]) == pytest.approx(0.1)

    @pytest.mark.parametrize("m", [1, 2, 5, 10])
    def test_geometric_grid(self, m):
        """Test doubling s grids give ratio 1/2."""
        assert s_grid_gap_ratio([2.0 ** k for k in range(1, m + 2)]) == 0.5

    def test_two_values(self):
        """Test the minimal two-value grid."""
        assert s_grid_gap_ratio([1.0, 2.0]) == 0.5

    def test_non_monotone(self):
        """Test a non-increasing grid is rejected."""
        with pytest.raises(InputError, match="increasing"):
            s_grid_gap_ratio([1.0, 3.0, 2.0])
