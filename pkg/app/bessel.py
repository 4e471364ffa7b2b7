"""
Radial profile of the Fourier transform of the normalized ball indicator.

    Λ_d(z) = Γ(d/2 + 1) (2/z)^{d/2} J_{d/2}(z)

so Λ_1(z) = sin z / z, Λ_2(z) = 2 J_1(z) / z and
Λ_3(z) = 3 (sin z - z cos z) / z^3. Small arguments use the power series,
large ones the half-integer closed forms (d = 1, 3) or Hankel's asymptotic
expansion of J_1 (d = 2).
"""
import math

import numpy as np
from scipy.optimize import brentq

from app.errors import UnsupportedDimensionError

SERIES_LIMIT = 12.0
_SERIES_MAX_TERMS = 80
_HANKEL_MAX_TERMS = 40

# brackets around the first positive zero of Λ_d
_FIRST_ZERO_BRACKETS = {1: (3.0, 3.3), 2: (3.5, 4.0), 3: (4.3, 4.6)}


def _check_dim(dim: int) -> None:
    if dim not in (1, 2, 3):
        raise UnsupportedDimensionError(dim)


def _series(dim: int, z: np.ndarray) -> np.ndarray:
    nu = dim / 2.0
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, _SERIES_MAX_TERMS):
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def hankel_pq(z: np.ndarray, mu: float = 4.0):
    """
    Hankel P and Q for order ν with μ = 4ν², summed up to the smallest term.

    Terms a_k(ν)/z^k follow a_k = a_{k-1} (μ - (2k-1)²) / (8k).
    """
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _HANKEL_MAX_TERMS):
        nxt = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        active &= np.abs(nxt) < np.abs(term)
        term = np.where(active, nxt, term)
        # (-1)^{k//2} sign pattern over the even (P) and odd (Q) terms
        sign = -1.0 if (k // 2) % 2 else 1.0
        contrib = np.where(active, sign * nxt, 0.0)
        if k % 2 == 0:
            p = p + contrib
        else:
            q = q + contrib
        if not active.any():
            break
    return p, q


def bessel_j1(z) -> np.ndarray:
    """J_1 for z >= 0 via the series (z <= 12) and Hankel's expansion beyond."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    small = z <= SERIES_LIMIT
    out[small] = 0.5 * z[small] * _series(2, z[small])
    big = z[~small]
    if big.size:
        p, q = hankel_pq(big)
        chi = big - 0.75 * math.pi
        out[~small] = np.sqrt(2.0 / (math.pi * big)) * (p * np.cos(chi) - q * np.sin(chi))
    return out


def ball_profile(dim: int, z) -> np.ndarray:
    """Λ_d(z) for z >= 0, elementwise; Λ_d(0) = 1."""
    _check_dim(dim)
    z = np.abs(np.asarray(z, dtype=np.float64))
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    small = z <= SERIES_LIMIT
    out[small] = _series(dim, z[small])
    big = z[~small]
    if big.size:
        if dim == 1:
            out[~small] = np.sin(big) / big
        elif dim == 3:
            out[~small] = 3.0 * (np.sin(big) - big * np.cos(big)) / big ** 3
        else:
            out[~small] = 2.0 * bessel_j1(big) / big
    return out[0] if scalar else out


def first_profile_zero(dim: int) -> float:
    """First positive zero of Λ_d (π, j_{1,1}, and the root of tan z = z)."""
    _check_dim(dim)
    lo, hi = _FIRST_ZERO_BRACKETS[dim]
    return float(brentq(lambda z: float(ball_profile(dim, z)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def hankel_envelope(z0: float) -> float:
    """Upper bound on |P| + |Q| for ν = 1, z >= z0: P and Q cut after one term each, remainders bounded by the next term."""
    return 1.0 + 3.0 / (8.0 * z0) + 15.0 / (128.0 * z0 ** 2) + 105.0 / (1024.0 * z0 ** 3)
