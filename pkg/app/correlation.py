"""
Pair counts at the scales s N^{-α/d} and the statistics built on them.
"""
import math
from typing import Sequence

import numpy as np
import structlog

from app.core import ball_volume, radius_cap
from app.errors import InputError
from app.kernels import require_supported_dim, triangle_profile
from app.models import Algorithm, NormKind, PointSet
from app.neighbors import neighbor_pairs
from app.schemas import KernelStatResult, PairCorrResult

logger = structlog.get_logger(__name__)


def pair_count(
    ps: PointSet,
    radius: float,
    norm: NormKind = NormKind.EUCLIDEAN,
    algorithm: Algorithm = Algorithm.CELLS,
) -> int:
    """Ordered pairs (m, n), m != n, with torus distance <= radius."""
    if not (radius > 0) or not math.isfinite(radius):
        raise InputError(f"radius must be positive and finite, got {radius}")
    if ps.n < 2:
        return 0
    radius = min(radius, radius_cap(ps.dim, norm))
    return sum(neighbor_pairs(ps, radius, norm, algorithm, reducer=lambda block: int(block[0].size)))


def target_value(dim: int, s: float, norm: NormKind) -> float:
    """Poissonian limit ω_d s^d (EUCLIDEAN) or (2s)^d (SUP)."""
    if norm is NormKind.SUP:
        return (2.0 * s) ** dim
    return ball_volume(dim) * s ** dim


def _statistic(ps: PointSet, s: float, alpha: float, norm: NormKind, algorithm: Algorithm) -> PairCorrResult:
    if not (s > 0) or not math.isfinite(s):
        raise InputError(f"s must be positive and finite, got {s}")
    n = float(ps.n)
    radius = s * n ** (-alpha / ps.dim)
    cap = radius_cap(ps.dim, norm)
    if radius > cap:
        logger.warning("radius_clamped", s=s, n=ps.n, radius=radius, cap=cap)
    count = pair_count(ps, radius, norm, algorithm)
    result = PairCorrResult(
        s=s,
        alpha=alpha,
        norm=norm,
        n=ps.n,
        radius=radius,
        count=count,
        normalized=count / n ** (2.0 - alpha),
        target=target_value(ps.dim, s, norm),
    )
    logger.debug("pair_statistic", s=s, alpha=alpha, n=ps.n, count=count, normalized=result.normalized)
    return result


def ppc_statistic(
    ps: PointSet,
    s: float,
    norm: NormKind = NormKind.EUCLIDEAN,
    algorithm: Algorithm = Algorithm.CELLS,
) -> PairCorrResult:
    """(1/N) #{m != n : ‖x_m - x_n‖ <= s N^{-1/d}} against its Poissonian target."""
    return _statistic(ps, s, 1.0, norm, algorithm)


def weak_ppc_statistic(
    ps: PointSet,
    s: float,
    alpha: float,
    algorithm: Algorithm = Algorithm.CELLS,
) -> PairCorrResult:
    """(1/N^{2-α}) #{m != n : |x_m - x_n| <= s N^{-α}}, one-dimensional only."""
    if ps.dim != 1:
        raise InputError(f"weak pair correlation is defined for d = 1 only, got d={ps.dim}")
    if not (0.0 < alpha <= 1.0):
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    return _statistic(ps, s, alpha, NormKind.EUCLIDEAN, algorithm)


def smoothed_pair_statistic(
    ps: PointSet,
    delta: float,
    algorithm: Algorithm = Algorithm.CELLS,
) -> KernelStatResult:
    """(1/N²) Σ_{m≠n} f_δ(x_m - x_n) with f_δ the self-convolved box kernel."""
    if not (0.0 < delta < 0.25):
        raise InputError(f"delta must lie in (0, 1/4), got {delta}")
    require_supported_dim(ps.dim)
    if ps.n < 2:
        return KernelStatResult(delta=delta, n=ps.n, dim=ps.dim, value=0.0)

    partials = neighbor_pairs(
        ps,
        2.0 * delta,
        NormKind.EUCLIDEAN,
        algorithm,
        reducer=lambda block: math.fsum(triangle_profile(ps.dim, delta, block[2]).tolist()),
    )
    value = math.fsum(partials) / float(ps.n) ** 2
    return KernelStatResult(delta=delta, n=ps.n, dim=ps.dim, value=value)


def s_grid_gap_ratio(svals: Sequence[float]) -> float:
    """max_n (s_{n+1} - s_n) / s_{M+1} over the grid with s_0 = 0 prepended."""
    values = np.asarray(list(svals), dtype=np.float64)
    if values.ndim != 1 or values.size < 2:
        raise InputError("need at least two s values")
    if not np.all(np.isfinite(values)) or values[0] <= 0:
        raise InputError("s values must be positive and finite")
    gaps = np.diff(np.concatenate(([0.0], values)))
    if np.any(gaps[1:] <= 0):
        raise InputError("s values must be strictly increasing")
    return float(gaps.max() / values[-1])
