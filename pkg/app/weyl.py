"""
Integer frequency balls and Weyl exponential sums S_N(ℓ) = Σ_k e(⟨ℓ, x_k⟩).

Phases are reduced modulo one before the trigonometric call. Each
coordinate is split as x = hi + lo with hi carrying 26 significant bits, so
ℓ·hi is exact for |ℓ| < 2^26 and its integer part can be dropped without
error.
"""
import math

import numpy as np
import structlog

from app.config import settings
from app.core import parallel_map
from app.errors import InputError, NumericalError
from app.metrics import spectrum_frequencies_total
from app.models import PointSet

logger = structlog.get_logger(__name__)

_SPLITTER = 134217729.0  # 2**27 + 1
_MAX_FREQUENCY = 1 << 26
_INTEGRAL_RTOL = 1e-9


def squared_radius_bound(radius: float) -> int:
    """Integer bound K with ‖ℓ‖² <= K ⇔ ‖ℓ‖ <= radius, snapping near-integral radius²."""
    if radius < 0 or not math.isfinite(radius):
        raise InputError(f"radius must be finite and >= 0, got {radius}")
    sq = radius * radius
    nearest = round(sq)
    if abs(sq - nearest) <= _INTEGRAL_RTOL * max(1.0, sq):
        return int(nearest)
    return int(math.floor(sq))


def integer_cutoff(value: float) -> int:
    """floor(value), snapping values within rounding of an integer."""
    nearest = round(value)
    if abs(value - nearest) <= _INTEGRAL_RTOL * max(1.0, abs(value)):
        return int(nearest)
    return int(math.floor(value))


def lattice_ball(dim: int, radius: float) -> np.ndarray:
    """
    All ℓ in Z^d with 1 <= ‖ℓ‖ <= radius, lexicographic order, shape (K, d).

    Membership compares the integer ‖ℓ‖² with `squared_radius_bound(radius)`.
    """
    if dim < 1:
        raise InputError(f"dimension must be >= 1, got {dim}")
    bound = squared_radius_bound(radius)
    if bound < 1:
        return np.empty((0, dim), dtype=np.int64)
    r = math.isqrt(bound)
    if dim == 1:
        ell = np.arange(-r, r + 1, dtype=np.int64)
        return ell[ell != 0][:, None]
    grid = np.indices((2 * r + 1,) * dim, dtype=np.int64).reshape(dim, -1).T - r
    norm2 = np.einsum("ij,ij->i", grid, grid)
    return grid[(norm2 >= 1) & (norm2 <= bound)]


def _canonical(ps: PointSet) -> np.ndarray:
    # lexicographic row order, first coordinate most significant
    x = ps.points
    return x[np.lexsort(x.T[::-1])]


def _split(x: np.ndarray):
    scaled = x * _SPLITTER
    hi = scaled - (scaled - x)
    return hi, x - hi


def _block_sums(hi: np.ndarray, lo: np.ndarray, ells: np.ndarray):
    """Real and imaginary parts of S(ℓ) for every row of `ells`."""
    f = ells.astype(np.float64)
    phase = np.zeros((ells.shape[0], hi.shape[0]), dtype=np.float64)
    for j in range(hi.shape[1]):
        prod = f[:, j, None] * hi[None, :, j]
        phase += prod - np.floor(prod)
        phase += f[:, j, None] * lo[None, :, j]
    phase -= np.floor(phase)
    angle = 2.0 * math.pi * phase
    return np.cos(angle).sum(axis=1), np.sin(angle).sum(axis=1)


def weyl_sums(ps: PointSet, ells: np.ndarray) -> np.ndarray:
    """S_N(ℓ) for each row of `ells` as a complex array."""
    ells = np.asarray(ells, dtype=np.int64)
    if ells.ndim == 1:
        ells = ells[None, :]
    if ells.shape[1] != ps.dim:
        raise InputError(f"frequency dimension {ells.shape[1]} does not match point dimension {ps.dim}")
    if ells.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    if np.abs(ells).max() >= _MAX_FREQUENCY:
        raise InputError(f"frequency components must stay below {_MAX_FREQUENCY}")

    hi, lo = _split(_canonical(ps))
    rows = max(1, settings.SPECTRUM_BLOCK_ELEMENTS // max(1, ps.n * ps.dim))
    blocks = [ells[i:i + rows] for i in range(0, ells.shape[0], rows)]
    parts = parallel_map(lambda block: _block_sums(hi, lo, block), blocks)
    re = np.concatenate([p[0] for p in parts])
    im = np.concatenate([p[1] for p in parts])
    spectrum_frequencies_total.inc(ells.shape[0])
    return re + 1j * im


def squared_magnitudes(ps: PointSet, ells: np.ndarray) -> np.ndarray:
    """|S_N(ℓ)|² for each row of `ells`, asserting |S_N(ℓ)|² <= N²."""
    sums = weyl_sums(ps, ells)
    mags = sums.real * sums.real + sums.imag * sums.imag
    ceiling = float(ps.n) ** 2 * (1.0 + 1e-12)
    if mags.size and mags.max() > ceiling:
        worst = int(np.argmax(mags))
        raise NumericalError(
            f"|S_N(l)|^2 = {mags[worst]!r} exceeds N^2 = {ps.n ** 2} at l = {ells[worst].tolist()}"
        )
    return mags


def weyl_sum(ps: PointSet, ell) -> complex:
    """S_N(ℓ) for a single frequency vector."""
    vec = np.atleast_1d(np.asarray(ell, dtype=np.int64))
    if vec.ndim != 1 or vec.shape[0] != ps.dim:
        raise InputError(f"frequency {list(np.ravel(vec))} does not have dimension {ps.dim}")
    return complex(weyl_sums(ps, vec[None, :])[0])
