"""
Seeded and deterministic sequence families.

RANDOM coordinates come from a counter-based splitmix64 stream: coordinate j
of point i is a pure function of (seed, i*d + j). Kronecker and quadratic
sequences are reduced modulo one in exact integer arithmetic.
"""
from typing import Callable, Dict

import numpy as np
import structlog

from app.core import reduce_unit_interval, validate_point_set
from app.errors import InputError
from app.metrics import points_generated_total
from app.models import Family, GeneratorSpec, PointSet

logger = structlog.get_logger(__name__)

_GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TWO_M53 = 2.0 ** -53


def splitmix64(seed: int, counters: np.ndarray) -> np.ndarray:
    """splitmix64 output for stream positions `counters` (uint64, wrapping)."""
    z = np.uint64(seed) + (counters.astype(np.uint64) + np.uint64(1)) * _GOLDEN_GAMMA
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


def uniform_stream(seed: int, start: int, count: int) -> np.ndarray:
    """`count` doubles in [0, 1) from stream positions start..start+count-1."""
    counters = np.arange(start, start + count, dtype=np.uint64)
    return (splitmix64(seed, counters) >> _S11).astype(np.float64) * _TWO_M53


def _random(spec: GeneratorSpec) -> np.ndarray:
    return uniform_stream(spec.seed_u64, 0, spec.count * spec.dim).reshape(spec.count, spec.dim)


def frac_of_multiple(multipliers: np.ndarray, alpha: float) -> np.ndarray:
    """Correctly rounded {k * alpha} for integer multipliers k, exact in between."""
    num, den = alpha.as_integer_ratio()
    k = multipliers.astype(object)
    return reduce_unit_interval(((k * num) % den / den).astype(np.float64))


def _kronecker(spec: GeneratorSpec) -> np.ndarray:
    n = np.arange(1, spec.count + 1, dtype=np.int64)
    cols = [frac_of_multiple(n, a) for a in spec.alpha]
    return np.stack(cols, axis=1)


def _quadratic(spec: GeneratorSpec) -> np.ndarray:
    if spec.dim != 1:
        raise InputError(f"QUADRATIC is one-dimensional, got d={spec.dim}")
    n = np.arange(1, spec.count + 1, dtype=object)
    return frac_of_multiple(n * n, spec.alpha[0])[:, None]


def integer_root(n: int, d: int) -> int | None:
    """m with m**d == n, or None."""
    guess = round(n ** (1.0 / d))
    for m in (guess - 1, guess, guess + 1):
        if m >= 1 and m ** d == n:
            return m
    return None


def _grid(spec: GeneratorSpec) -> np.ndarray:
    if spec.dim == 1:
        return (np.arange(spec.count, dtype=np.float64) / spec.count)[:, None]
    m = integer_root(spec.count, spec.dim)
    if m is None:
        raise InputError(f"GRID needs a perfect {spec.dim}-th power, got N={spec.count}")
    idx = np.indices((m,) * spec.dim).reshape(spec.dim, -1).T
    return idx.astype(np.float64) / m


def radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse, as one exact integer ratio per index."""
    indices = np.asarray(indices, dtype=np.int64)
    top = int(indices.max()) if indices.size else 0
    digits = 1
    while base ** digits <= top:
        digits += 1
    remaining = indices.copy()
    reversed_digits = np.zeros_like(indices)
    for _ in range(digits):
        reversed_digits = reversed_digits * base + remaining % base
        remaining //= base
    return reversed_digits.astype(np.float64) / float(base ** digits)


def _halton(spec: GeneratorSpec) -> np.ndarray:
    idx = np.arange(spec.count, dtype=np.int64)
    return np.stack([radical_inverse(idx, b) for b in spec.bases], axis=1)


def _clustered(spec: GeneratorSpec) -> np.ndarray:
    k = spec.clusters
    centers = uniform_stream(spec.seed_u64, 0, k * spec.dim).reshape(k, spec.dim)
    return centers[np.arange(spec.count) % k]


_BUILDERS: Dict[Family, Callable[[GeneratorSpec], np.ndarray]] = {
    Family.RANDOM: _random,
    Family.KRONECKER: _kronecker,
    Family.QUADRATIC: _quadratic,
    Family.GRID: _grid,
    Family.HALTON: _halton,
    Family.CLUSTERED: _clustered,
}


def generate(spec: GeneratorSpec) -> PointSet:
    """Build the PointSet described by `spec`."""
    coords = _BUILDERS[spec.family](spec)
    ps = validate_point_set(coords, label=spec.describe())
    points_generated_total.labels(family=spec.family.value).inc(ps.n)
    logger.info("points_generated", family=spec.family.value, dim=ps.dim, n=ps.n)
    return ps
