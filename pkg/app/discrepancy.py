"""
Star discrepancy: exact in one dimension, bracketed on an anchored grid in
higher dimensions. Anchored boxes are half-open, [0, t_1) x ... x [0, t_d).
"""
import numpy as np
import structlog

from app.config import settings
from app.errors import InputError
from app.models import PointSet
from app.schemas import DiscrepancyResult

logger = structlog.get_logger(__name__)


def star_discrepancy_1d(ps: PointSet) -> DiscrepancyResult:
    """D*_N = 1/(2N) + max_k |x_(k) - (2k-1)/(2N)| over the order statistics."""
    if ps.dim != 1:
        raise InputError(f"exact star discrepancy is implemented for d = 1, got d={ps.dim}")
    n = ps.n
    x = np.sort(ps.points[:, 0])
    centers = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    value = float(1.0 / (2.0 * n) + np.max(np.abs(x - centers)))
    return DiscrepancyResult(n=n, lower=value, upper=value, exact=True)


def anchored_counts(ps: PointSet, resolution: int) -> np.ndarray:
    """
    C[a_1, ..., a_d] = #{x : x_j < a_j/m for all j}, a_j in 0..m.

    The grid values a/m are the rounded doubles np.arange(1, m+1)/m and the
    comparison is the strict float comparison x < a/m.
    """
    m, d = resolution, ps.dim
    cells = (m + 1) ** d
    if cells > settings.DISCREPANCY_MAX_CELLS:
        raise InputError(
            f"anchored grid of {m + 1}^{d} = {cells} cells exceeds DISCREPANCY_MAX_CELLS={settings.DISCREPANCY_MAX_CELLS}"
        )
    grid = np.arange(1, m + 1, dtype=np.float64) / m
    # bins[i, j] = number of grid values <= x_ij, so x_ij < grid[a-1] iff a > bins[i, j]
    bins = np.searchsorted(grid, ps.points, side="right")
    hist = np.zeros((m + 1,) * d, dtype=np.int64)
    np.add.at(hist, tuple(bins.T), 1)
    counts = hist
    for axis in range(d):
        counts = np.cumsum(counts, axis=axis)
    # counts[b] = #{bins <= b}; shift so that index a counts bins <= a-1
    padded = np.zeros((m + 1,) * d, dtype=np.int64)
    padded[(slice(1, None),) * d] = counts[(slice(0, m),) * d]
    return padded


def _volumes(resolution: int, dim: int) -> np.ndarray:
    edge = np.concatenate(([0.0], np.arange(1, resolution + 1, dtype=np.float64) / resolution))
    vol = edge
    for _ in range(dim - 1):
        vol = np.multiply.outer(vol, edge)
    return vol


def star_discrepancy_box(ps: PointSet, resolution: int) -> DiscrepancyResult:
    """
    Grid bracket of the star discrepancy.

    lower: max over grid-anchored boxes of |count/N - volume|.
    upper: every box lies between two grid boxes sharing a cell, so its local
    discrepancy is at most max(C(a+1)/N - V(a), V(a+1) - C(a)/N) over cells;
    this never exceeds lower + d/m and does not grow when m is refined to a
    multiple of itself.
    """
    m, d, n = resolution, ps.dim, float(ps.n)
    if m < 2:
        raise InputError(f"resolution must be >= 2, got {m}")
    counts = anchored_counts(ps, m) / n
    vol = _volumes(m, d)
    lower = float(np.max(np.abs(counts - vol)))

    lo = (slice(0, m),) * d
    hi = (slice(1, m + 1),) * d
    bracket = np.maximum(counts[hi] - vol[lo], vol[hi] - counts[lo])
    upper = float(min(1.0, max(float(bracket.max()), lower)))
    logger.debug("star_discrepancy_box", n=ps.n, dim=d, resolution=m, lower=lower, upper=upper)
    return DiscrepancyResult(n=ps.n, lower=lower, upper=upper, exact=False, resolution=m)
