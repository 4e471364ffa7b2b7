"""
Ordered neighbor-pair enumeration on the torus.

Two strategies produce the same pairs: BRUTE scans row blocks of the full
distance matrix; CELLS bins points into a periodic grid of cells at least
one radius wide and only inspects the 3^d surrounding cells.
"""
import itertools
import math
from typing import Any, Callable, Iterator, List, Optional, Tuple

import numpy as np
import structlog

from app.config import settings
from app.core import norm_of, parallel_map, torus_displacement
from app.metrics import pairs_examined_total
from app.models import Algorithm, NormKind, PointSet

logger = structlog.get_logger(__name__)

PairBlock = Tuple[np.ndarray, np.ndarray, np.ndarray]
PairTask = Callable[[], PairBlock]

# Cell side is kept slightly above the radius so floor(x*M) rounding cannot
# place a true neighbor two cells away.
_CELL_MARGIN = 1e-6


def cells_per_axis(n: int, dim: int, radius: float) -> int:
    """Cells per axis for the cell list, or 0 when brute force must be used."""
    by_radius = int(math.floor((1.0 - _CELL_MARGIN) / radius))
    by_count = int(math.floor((4.0 * n) ** (1.0 / dim) + 1e-9))
    m = min(by_radius, by_count)
    return m if m >= 3 else 0


def _brute_tasks(x: np.ndarray, radius: float, norm: NormKind) -> List[PairTask]:
    n, d = x.shape
    rows = max(1, settings.PAIR_BLOCK_ELEMENTS // max(1, n * d))

    def make(lo: int, hi: int) -> PairTask:
        def task() -> PairBlock:
            dist = norm_of(torus_displacement(x[lo:hi, None, :], x[None, :, :]), norm)
            mask = dist <= radius
            local = np.arange(hi - lo)
            mask[local, lo + local] = False
            i, j = np.nonzero(mask)
            pairs_examined_total.labels(algorithm=Algorithm.BRUTE.value).inc((hi - lo) * n)
            return i + lo, j, dist[i, j]

        return task

    return [make(lo, min(lo + rows, n)) for lo in range(0, n, rows)]


def _cell_tasks(x: np.ndarray, radius: float, norm: NormKind, m: int) -> List[PairTask]:
    n, d = x.shape
    shape = (m,) * d
    coords = np.clip(np.floor(x * m).astype(np.int64), 0, m - 1)
    cell_of = np.ravel_multi_index(coords.T, shape)
    order = np.argsort(cell_of, kind="stable")
    counts = np.bincount(cell_of, minlength=m ** d)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))

    offsets = np.array(list(itertools.product((-1, 0, 1), repeat=d)), dtype=np.int64)
    # (n, 3^d) neighbor cell ids; offsets are distinct modulo m since m >= 3
    neigh = np.ravel_multi_index(
        ((coords[:, None, :] + offsets[None, :, :]) % m).transpose(2, 0, 1), shape
    )
    per_point = counts[neigh].sum(axis=1)
    budget = max(1, settings.PAIR_BLOCK_ELEMENTS // d)
    cum = np.cumsum(per_point)
    bounds = [0]
    while bounds[-1] < n:
        base = cum[bounds[-1] - 1] if bounds[-1] > 0 else 0
        nxt = int(np.searchsorted(cum, base + budget, side="right"))
        bounds.append(max(nxt, bounds[-1] + 1))
    bounds[-1] = n

    def make(lo: int, hi: int) -> PairTask:
        def task() -> PairBlock:
            nb = neigh[lo:hi].ravel()
            cnt = counts[nb]
            total = int(cnt.sum())
            if total == 0:
                empty = np.empty(0, dtype=np.int64)
                return empty, empty, np.empty(0, dtype=np.float64)
            owner = np.repeat(np.repeat(np.arange(lo, hi), neigh.shape[1]), cnt)
            seg_start = np.repeat(starts[nb] - (np.cumsum(cnt) - cnt), cnt)
            j = order[seg_start + np.arange(total)]
            keep = owner != j
            i, j = owner[keep], j[keep]
            dist = norm_of(torus_displacement(x[i], x[j]), norm)
            within = dist <= radius
            pairs_examined_total.labels(algorithm=Algorithm.CELLS.value).inc(total)
            return i[within], j[within], dist[within]

        return task

    return [make(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]


def pair_tasks(ps: PointSet, radius: float, norm: NormKind, algorithm: Algorithm) -> List[PairTask]:
    """Independent work units that together yield every ordered pair within `radius`."""
    x = ps.points
    if algorithm is Algorithm.CELLS:
        m = cells_per_axis(ps.n, ps.dim, radius)
        if m:
            logger.debug("cell_list", n=ps.n, dim=ps.dim, radius=radius, cells_per_axis=m)
            return _cell_tasks(x, radius, norm, m)
        logger.debug("cell_list_fallback", n=ps.n, dim=ps.dim, radius=radius)
    return _brute_tasks(x, radius, norm)


def neighbor_pairs(
    ps: PointSet,
    radius: float,
    norm: NormKind = NormKind.EUCLIDEAN,
    algorithm: Algorithm = Algorithm.CELLS,
    reducer: Optional[Callable[[PairBlock], Any]] = None,
) -> Iterator[Any]:
    """
    Yield blocks (i, j, dist) of ordered pairs i != j with distance <= radius.

    With `reducer`, each block is reduced inside its worker and the reduced
    values are yielded instead. Blocks come out in a fixed order that does
    not depend on the number of worker threads.
    """
    tasks = pair_tasks(ps, radius, norm, algorithm)
    if reducer is None:
        yield from parallel_map(lambda task: task(), tasks)
    else:
        yield from parallel_map(lambda task: reducer(task()), tasks)
