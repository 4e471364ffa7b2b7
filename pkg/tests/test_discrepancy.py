"""
Tests for star discrepancy.
"""

import itertools

import numpy as np
import pytest

from app.config import settings
from app.core import validate_point_set
from app.discrepancy import anchored_counts, star_discrepancy_1d, star_discrepancy_box
from app.errors import InputError


def corner_reference(points: np.ndarray, m: int) -> float:
    """max |count/N - volume| over every grid-anchored box, by enumeration."""
    n, d = points.shape
    edges = np.concatenate(([0.0], np.arange(1, m + 1, dtype=np.float64) / m))
    best = 0.0
    for corner in itertools.product(range(m + 1), repeat=d):
        upper = edges[list(corner)]
        count = int(np.sum(np.all(points < upper, axis=1)))
        volume = 1.0
        for value in upper:
            volume *= value
        best = max(best, abs(count / n - volume))
    return best


def endpoint_reference(x: np.ndarray) -> float:
    """sup |#{x < a}/N - a| over a at each point, approached from both sides."""
    n = x.shape[0]
    below = np.sum(x[:, None] < x[None, :], axis=0) / n
    upto = np.sum(x[:, None] <= x[None, :], axis=0) / n
    return float(max(np.max(np.abs(below - x)), np.max(np.abs(upto - x))))


class TestStarDiscrepancy1D:
    """Exact one-dimensional star discrepancy."""

    def test_single_midpoint(self):
        """Test {1/2} has discrepancy 1/2."""
        result = star_discrepancy_1d(validate_point_set([[0.5]]))
        assert result.lower == result.upper == 0.5
        assert result.exact

    def test_centered_grid(self):
        """Test the centered grid attains 1/(2N)."""
        n = 10
        ps = validate_point_set((2.0 * np.arange(1, n + 1) - 1.0)[:, None] / (2.0 * n))
        assert star_discrepancy_1d(ps).upper == pytest.approx(0.05)

    def test_point_at_origin(self):
        """Test {0} has discrepancy 1."""
        assert star_discrepancy_1d(validate_point_set([[0.0]])).upper == 1.0

    def test_order_does_not_matter(self, make_random, rng):
        """Test shuffling points leaves the value unchanged."""
        ps = make_random(300, 1, seed=3)
        shuffled = validate_point_set(ps.points[rng.permutation(ps.n)])
        assert star_discrepancy_1d(shuffled) == star_discrepancy_1d(ps)

    def test_requires_dimension_one(self, grid_2d_4):
        """Test the exact formula rejects d > 1."""
        with pytest.raises(InputError):
            star_discrepancy_1d(grid_2d_4)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(100))
    def test_matches_endpoint_search(self, make_random, seed):
        """Test the closed form matches a search over every interval endpoint."""
        n = int(np.random.default_rng(seed).integers(1, 1001))
        ps = make_random(n, 1, seed=seed)
        result = star_discrepancy_1d(ps)
        assert result.upper == pytest.approx(endpoint_reference(ps.points[:, 0]), abs=1e-12)


class TestStarDiscrepancyBox:
    """Grid bracket of the star discrepancy."""

    def test_grid_matches_enumeration(self, grid_2d_4):
        """Test the lower bound equals corner enumeration on a 2x2 grid."""
        result = star_discrepancy_box(grid_2d_4, 4)
        assert result.lower == corner_reference(grid_2d_4.points, 4)
        assert not result.exact
        assert result.resolution == 4

    @pytest.mark.parametrize("dim,m", [(1, 17), (2, 9), (3, 5)])
    def test_random_matches_enumeration(self, make_random, dim, m):
        """Test the lower bound equals corner enumeration on random sets."""
        ps = make_random(60, dim, seed=dim)
        assert star_discrepancy_box(ps, m).lower == corner_reference(ps.points, m)

    def test_points_on_grid_lines(self):
        """Test half-open boxes treat points on grid lines correctly."""
        ps = validate_point_set([[0.25, 0.5], [0.0, 0.75], [0.5, 0.0]])
        assert star_discrepancy_box(ps, 4).lower == corner_reference(ps.points, 4)

    def test_origin_cluster_2d(self):
        """Test points at the origin give lower 15/16 and upper 1."""
        result = star_discrepancy_box(validate_point_set(np.zeros((8, 2))), 4)
        assert result.lower == 0.9375
        assert result.upper == 1.0

    @pytest.mark.parametrize("seed", range(5))
    def test_brackets_exact_value(self, make_random, seed):
        """Test lower <= exact <= upper in d=1."""
        ps = make_random(200, 1, seed=seed)
        exact = star_discrepancy_1d(ps).upper
        for m in (2, 10, 64, 1000):
            result = star_discrepancy_box(ps, m)
            assert result.lower <= exact + 1e-12
            assert exact <= result.upper + 1e-12

    def test_upper_within_grid_gap(self, make_random):
        """Test upper never exceeds lower + d/m."""
        ps = make_random(500, 2, seed=9)
        for m in (4, 16, 64):
            result = star_discrepancy_box(ps, m)
            assert result.upper <= result.lower + 2.0 / m + 1e-12

    def test_nested_refinement(self, make_random):
        """Test refining m to a multiple tightens both ends."""
        ps = make_random(400, 2, seed=10)
        results = [star_discrepancy_box(ps, m) for m in (4, 8, 16, 32)]
        for coarse, fine in zip(results, results[1:]):
            assert fine.lower >= coarse.lower
            assert fine.upper <= coarse.upper + 1e-15

    def test_anchored_counts_corners(self, make_random):
        """Test anchored counts at the empty and full corners."""
        ps = make_random(100, 2, seed=11)
        counts = anchored_counts(ps, 5)
        assert counts[0, 0] == 0
        assert counts[5, 5] == 100
        assert counts.shape == (6, 6)

    def test_resolution_minimum(self, grid_2d_4):
        """Test resolution below 2 is rejected."""
        with pytest.raises(InputError):
            star_discrepancy_box(grid_2d_4, 1)

    def test_cell_budget(self, make_random):
        """Test an anchored grid above DISCREPANCY_MAX_CELLS is refused before allocation."""
        ps = make_random(10, 5, seed=12)
        with pytest.raises(InputError, match="DISCREPANCY_MAX_CELLS"):
            star_discrepancy_box(ps, 64)

    def test_cell_budget_from_settings(self, grid_2d_4, monkeypatch):
        """Test the cell budget follows settings."""
        monkeypatch.setattr(settings, "DISCREPANCY_MAX_CELLS", 25)
        assert star_discrepancy_box(grid_2d_4, 4).resolution == 4
        with pytest.raises(InputError, match="6\\^2 = 36 cells"):
            star_discrepancy_box(grid_2d_4, 5)
