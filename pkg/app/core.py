"""
Torus geometry, point-set validation and shared numeric helpers.

Every distance in the toolkit goes through `torus_displacement` and
`norm_of`, so brute-force and cell-list counting see bitwise-identical values.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar, Union

import numpy as np
import structlog

from app.config import settings
from app.errors import InputError
from app.models import NormKind, PointSet, TorusPoint

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")

PointLike = Union[TorusPoint, Sequence[float], np.ndarray]


def ball_volume(dim: int) -> float:
    """Volume ω_d of the Euclidean unit ball in R^d (ω_0 = 1)."""
    if dim == 1:
        return 2.0
    if dim == 2:
        return math.pi
    if dim == 3:
        return 4.0 * math.pi / 3.0
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def radius_cap(dim: int, norm: NormKind) -> float:
    """Largest possible torus distance under `norm`."""
    return 0.5 if norm is NormKind.SUP else math.sqrt(dim) / 2.0


def torus_displacement(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-coordinate wraparound displacement min(|a-b|, 1-|a-b|), broadcasting."""
    diff = np.abs(a - b)
    return np.minimum(diff, 1.0 - diff)


def norm_of(disp: np.ndarray, norm: NormKind) -> np.ndarray:
    """Norm over the last axis, accumulated coordinate by coordinate."""
    if norm is NormKind.SUP:
        return np.max(disp, axis=-1)
    acc = disp[..., 0] * disp[..., 0]
    for j in range(1, disp.shape[-1]):
        acc = acc + disp[..., j] * disp[..., j]
    return np.sqrt(acc)


def as_coords(p: PointLike) -> np.ndarray:
    if isinstance(p, TorusPoint):
        return np.asarray(p.coords, dtype=np.float64)
    return np.atleast_1d(np.asarray(p, dtype=np.float64))


def torus_distance(p: PointLike, q: PointLike, norm: NormKind = NormKind.EUCLIDEAN) -> float:
    """Distance between two torus points under `norm`."""
    a, b = as_coords(p), as_coords(q)
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(norm_of(torus_displacement(a, b)[None, :], norm)[0])


def reduce_unit_interval(values: np.ndarray) -> np.ndarray:
    """Identify exact 1.0 with 0.0 (torus identification), in place."""
    values[values == 1.0] = 0.0
    return values


def validate_point_set(raw: Union[Iterable[Sequence[float]], np.ndarray], label: str = "") -> PointSet:
    """Build a PointSet from coordinate rows, mapping exact 1.0 to 0.0."""
    if isinstance(raw, np.ndarray):
        if raw.ndim != 2:
            raise InputError(f"expected a 2-d array of rows, got shape {raw.shape}")
        arr = np.array(raw, dtype=np.float64, copy=True)
    else:
        rows = [list(r) for r in raw]
        if not rows:
            raise InputError("point set is empty")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise InputError(f"ragged rows: found dimensions {sorted(widths)}")
        try:
            arr = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise InputError(f"non-numeric coordinate: {e}") from e

    if arr.shape[0] == 0:
        raise InputError("point set is empty")
    if arr.shape[1] == 0:
        raise InputError("points must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise InputError("coordinates must be finite")
    bad = (arr < 0.0) | (arr > 1.0)
    if np.any(bad):
        row, col = np.argwhere(bad)[0]
        raise InputError(f"coordinate {arr[row, col]!r} at row {row} outside [0, 1)")
    reduce_unit_interval(arr)
    return PointSet(points=arr, label=label)


def parallel_map(fn: Callable[[T], R], items: Sequence[T], max_workers: int | None = None) -> List[R]:
    """Map over `items` with at most PPC_THREADS workers, preserving order."""
    workers = min(max_workers or settings.PPC_THREADS, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="ppc") as pool:
        return list(pool.map(fn, items))
