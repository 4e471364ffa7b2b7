"""
Box kernel g, its self-convolution f = g∗g, their Fourier data, and the
Parseval identity

    Σ_{m,n} f(x_m - x_n) = Σ_ℓ ĝ(ℓ)² |S_N(ℓ)|²

checked numerically with a rigorous bound on the truncated tail.
"""
import math
from typing import Tuple

import numpy as np
import structlog
from scipy.integrate import quad
from scipy.special import j0

from app.bessel import ball_profile, first_profile_zero, hankel_envelope
from app.config import settings
from app.core import PointLike, as_coords, ball_volume, norm_of, torus_displacement
from app.errors import InputError, NumericalError, UnsupportedDimensionError
from app.models import Algorithm, KernelParams, NormKind, PointSet
from app.neighbors import neighbor_pairs
from app.schemas import ParsevalReport
from app.weyl import lattice_ball, squared_magnitudes, squared_radius_bound

logger = structlog.get_logger(__name__)

SUPPORTED_DIMS = (1, 2, 3)

# slack for rounding in the coefficients and Weyl sums when rhs meets lhs
_BRACKET_RTOL = 1e-10


def require_supported_dim(dim: int) -> None:
    if dim not in SUPPORTED_DIMS:
        raise UnsupportedDimensionError(dim, SUPPORTED_DIMS)


def _origin_distance(kp: KernelParams, x: PointLike) -> float:
    coords = as_coords(x)
    if coords.shape[0] != kp.dim:
        raise InputError(f"point dimension {coords.shape[0]} does not match kernel dimension {kp.dim}")
    return float(norm_of(torus_displacement(coords, 0.0)[None, :], NormKind.EUCLIDEAN)[0])


def kernel_peak(dim: int, delta: float) -> float:
    """g's height 1/(ω_d δ^d), which is also f(0)."""
    return 1.0 / (ball_volume(dim) * delta ** dim)


def box_kernel_eval(kp: KernelParams, x: PointLike) -> float:
    """g(x): normalized indicator of the δ-ball around the origin."""
    return kernel_peak(kp.dim, kp.delta) if _origin_distance(kp, x) <= kp.delta else 0.0


def triangle_profile(dim: int, delta: float, r) -> np.ndarray:
    """f = g∗g as a function of the distance r, vectorized; zero for r >= 2δ."""
    require_supported_dim(dim)
    r = np.asarray(r, dtype=np.float64)
    inside = r < 2.0 * delta
    rr = np.where(inside, r, 2.0 * delta)
    if dim == 1:
        value = 1.0 / (2.0 * delta) - rr / (4.0 * delta * delta)
    elif dim == 2:
        # lens area of two δ-disks at center distance r
        ratio = np.clip(rr / (2.0 * delta), 0.0, 1.0)
        lens = 2.0 * delta * delta * np.arccos(ratio) - 0.5 * rr * np.sqrt(np.maximum(4.0 * delta * delta - rr * rr, 0.0))
        value = lens / (math.pi * delta * delta) ** 2
    else:
        # volume of two intersecting δ-balls
        lens = math.pi * (4.0 * delta + rr) * (2.0 * delta - rr) ** 2 / 12.0
        value = lens / (ball_volume(3) * delta ** 3) ** 2
    return np.where(inside, value, 0.0)


def triangle_kernel_eval(kp: KernelParams, x: PointLike) -> float:
    """f(x) = (g∗g)(x) on the torus."""
    require_supported_dim(kp.dim)
    return float(triangle_profile(kp.dim, kp.delta, _origin_distance(kp, x)))


def box_fourier_coeffs(dim: int, delta: float, ells: np.ndarray) -> np.ndarray:
    """ĝ(ℓ) = Λ_d(2π‖ℓ‖δ) for each row of `ells`."""
    require_supported_dim(dim)
    ells = np.asarray(ells, dtype=np.float64).reshape(-1, dim)
    norms = np.sqrt(np.einsum("ij,ij->i", ells, ells))
    return np.atleast_1d(ball_profile(dim, 2.0 * math.pi * delta * norms))


def box_fourier_coeff(kp: KernelParams, ell) -> float:
    """ĝ(ℓ) for one integer frequency vector."""
    vec = np.atleast_1d(np.asarray(ell, dtype=np.int64))
    if vec.shape[0] != kp.dim:
        raise InputError(f"frequency dimension {vec.shape[0]} does not match kernel dimension {kp.dim}")
    return float(box_fourier_coeffs(kp.dim, kp.delta, vec[None, :])[0])


def profile_by_quadrature(dim: int, z: float) -> float:
    """
    Λ_d(z) by slicing the unit ball perpendicular to the frequency:

        (ω_{d-1}/ω_d) ∫_{-π/2}^{π/2} cos(z sin φ) cos^d φ dφ
    """
    require_supported_dim(dim)
    ratio = (ball_volume(dim - 1) if dim > 1 else 1.0) / ball_volume(dim)
    value, _ = quad(
        lambda phi: math.cos(z * math.sin(phi)) * math.cos(phi) ** dim,
        -0.5 * math.pi,
        0.5 * math.pi,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=400,
    )
    return ratio * value


def box_fourier_coeff_quadrature(kp: KernelParams, ell) -> float:
    """ĝ(ℓ) from direct quadrature of the ball indicator."""
    vec = np.atleast_1d(np.asarray(ell, dtype=np.float64))
    return profile_by_quadrature(kp.dim, 2.0 * math.pi * kp.delta * float(np.linalg.norm(vec)))


def triangle_fourier_coeff_quadrature(kp: KernelParams, ell) -> float:
    """f̂(ℓ) by radial quadrature of the closed-form f; equals ĝ(ℓ)²."""
    require_supported_dim(kp.dim)
    k = float(np.linalg.norm(np.atleast_1d(np.asarray(ell, dtype=np.float64))))
    w = 2.0 * math.pi * k
    support = 2.0 * kp.delta
    f = lambda r: float(triangle_profile(kp.dim, kp.delta, r))  # noqa: E731
    opts = dict(epsabs=1e-13, epsrel=1e-12, limit=400)
    if kp.dim == 1:
        value, _ = quad(lambda r: 2.0 * f(r) * math.cos(w * r), 0.0, support, **opts)
    elif kp.dim == 2:
        value, _ = quad(lambda r: 2.0 * math.pi * r * f(r) * float(j0(w * r)), 0.0, support, **opts)
    else:
        value, _ = quad(lambda r: 4.0 * math.pi * r * r * f(r) * float(np.sinc(w * r / math.pi)), 0.0, support, **opts)
    return value


def multiplier_scale(dim: int, c2: float) -> Tuple[float, float]:
    """
    Adjacent floats (z_lo, z_hi) with Λ_d(z_lo)² >= c2 > Λ_d(z_hi)², found by
    bisection on [0, first zero] where Λ_d decreases.
    """
    require_supported_dim(dim)
    if not (0.0 < c2 < 1.0):
        raise InputError(f"c2 must lie in (0, 1), got {c2}")
    lo, hi = 0.0, first_profile_zero(dim)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return lo, hi
        if float(ball_profile(dim, mid)) ** 2 >= c2:
            lo = mid
        else:
            hi = mid


def multiplier_radius(kp: KernelParams, c2: float | None = None) -> float:
    """Largest L with ĝ(ℓ)² >= c2 for every ‖ℓ‖ <= L."""
    c2 = settings.MULTIPLIER_C2 if c2 is None else c2
    z_lo, _ = multiplier_scale(kp.dim, c2)
    scale = 2.0 * math.pi * kp.delta
    radius = z_lo / scale
    while float(ball_profile(kp.dim, scale * radius)) ** 2 < c2:
        radius = math.nextafter(radius, 0.0)
    return radius


def multiplier_constant(dim: int, c2: float | None = None) -> float:
    """κ_d = δ · multiplier_radius, independent of δ."""
    c2 = settings.MULTIPLIER_C2 if c2 is None else c2
    return multiplier_scale(dim, c2)[0] / (2.0 * math.pi)


def tail_bound(dim: int, delta: float, n: int, radius: float) -> float:
    """
    Rigorous bound on Σ_{‖ℓ‖² > K} ĝ(ℓ)² |S_N(ℓ)|², K = squared_radius_bound(radius).

    d = 1: ĝ(ℓ)² <= (2πℓδ)^-2 and Σ_{ℓ>M} ℓ^-2 <= 1/M.
    d = 2: |J_1(z)| <= (2/(πz))^{1/2} H(z0), so ĝ² <= (8/π) H(z0)² z^-3.
    d = 3: |sin z - z cos z| <= z (1 + 1/z0), so ĝ² <= 9 (1 + 1/z0)² z^-4.
    The lattice sum Σ_{‖ℓ‖>L} ‖ℓ‖^-p is bounded by the integral over
    ‖y‖ >= L - 2h, h = √d/2, which needs L >= 3h.
    """
    require_supported_dim(dim)
    n2 = float(n) ** 2
    if dim == 1:
        m = math.isqrt(squared_radius_bound(radius))
        if m < 1:
            return math.inf
        return n2 / (2.0 * math.pi ** 2 * delta ** 2 * m)
    h = math.sqrt(dim) / 2.0
    if radius < 3.0 * h:
        return math.inf
    z0 = 2.0 * math.pi * delta * radius
    if dim == 2:
        p, envelope = 3, (8.0 / math.pi) * hankel_envelope(z0) ** 2
    else:
        p, envelope = 4, 9.0 * (1.0 + 1.0 / z0) ** 2
    shell = dim * ball_volume(dim) * 2.0 ** (dim - 1) * (radius - 2.0 * h) ** (dim - p) / (p - dim)
    return n2 * envelope * (2.0 * math.pi * delta) ** (-p) * shell


def _lattice_size(dim: int, radius: float) -> float:
    if dim == 1:
        return 2.0 * radius
    return ball_volume(dim) * (radius + math.sqrt(dim) / 2.0) ** dim


def truncation_radius(dim: int, delta: float, n: int, tol: float) -> float:
    """Smallest radius on a ×1.25 ladder whose tail bound is below `tol`, within the lattice budget."""
    cap = settings.PARSEVAL_MAX_LATTICE
    if dim == 1:
        wanted = math.floor(float(n) ** 2 / (2.0 * math.pi ** 2 * delta ** 2 * tol)) + 1
        if wanted > cap // 2:
            logger.warning("parseval_lattice_budget_reached", dim=dim, delta=delta, n=n, radius=cap // 2, tol=tol)
            wanted = cap // 2
        return float(wanted)
    h = math.sqrt(dim) / 2.0
    affordable = (cap / ball_volume(dim)) ** (1.0 / dim) - h
    radius = max(3.0 * h, min(1.0 / delta, affordable))
    while tail_bound(dim, delta, n, radius) >= tol:
        nxt = radius * 1.25
        if _lattice_size(dim, nxt) > cap:
            logger.warning("parseval_lattice_budget_reached", dim=dim, delta=delta, n=n, radius=radius, tol=tol)
            break
        radius = nxt
    return radius


def parseval_check(ps: PointSet, kp: KernelParams, trunc_tol: float) -> ParsevalReport:
    """Compare Σ_{m,n} f(x_m - x_n) with the truncated spectral side."""
    require_supported_dim(kp.dim)
    if kp.dim != ps.dim:
        raise InputError(f"kernel dimension {kp.dim} does not match point dimension {ps.dim}")
    if ps.n > settings.PARSEVAL_MAX_POINTS:
        raise InputError(f"parseval oracle limited to N <= {settings.PARSEVAL_MAX_POINTS}, got {ps.n}")
    if not trunc_tol > 0:
        raise InputError(f"trunc_tol must be positive, got {trunc_tol}")

    diagonal = ps.n * kernel_peak(kp.dim, kp.delta)
    partials = neighbor_pairs(
        ps,
        2.0 * kp.delta,
        NormKind.EUCLIDEAN,
        Algorithm.BRUTE,
        reducer=lambda block: math.fsum(triangle_profile(kp.dim, kp.delta, block[2]).tolist()),
    )
    lhs = math.fsum([diagonal, *partials])

    radius = truncation_radius(kp.dim, kp.delta, ps.n, trunc_tol)
    ells = lattice_ball(kp.dim, radius)
    coeffs = box_fourier_coeffs(kp.dim, kp.delta, ells)
    mags = squared_magnitudes(ps, ells)
    n2 = float(ps.n) ** 2
    rhs = math.fsum([n2, *(coeffs * coeffs * mags).tolist()])
    # every dropped term is >= 0, so the truncated side sits in [N², lhs]
    if not (n2 <= rhs <= lhs * (1.0 + _BRACKET_RTOL)):
        raise NumericalError(f"truncated Parseval sum {rhs!r} outside [{n2!r}, {lhs!r}]")
    tail = tail_bound(kp.dim, kp.delta, ps.n, radius)
    gap = abs(lhs - rhs)
    converged = tail < trunc_tol

    report = ParsevalReport(
        n=ps.n,
        dim=kp.dim,
        delta=kp.delta,
        lhs=lhs,
        rhs=rhs,
        tail_bound=tail,
        gap=gap,
        truncation_radius=radius,
        lattice_size=int(ells.shape[0]),
        converged=converged,
        consistent=converged and gap <= tail + 1e-8 * abs(lhs),
    )
    logger.info(
        "parseval_check",
        n=ps.n,
        dim=kp.dim,
        delta=kp.delta,
        radius=radius,
        lattice=report.lattice_size,
        gap=gap,
        tail_bound=tail,
        converged=converged,
    )
    return report


def kernel_table(kp: KernelParams, ell) -> dict:
    """g, f and ĝ values used by the `kernel` subcommand."""
    vec = np.atleast_1d(np.asarray(ell, dtype=np.int64))
    return {
        "dim": kp.dim,
        "delta": kp.delta,
        "ell": vec.tolist(),
        "g_origin": kernel_peak(kp.dim, kp.delta),
        "f_origin": float(triangle_profile(kp.dim, kp.delta, 0.0)),
        "g_hat": box_fourier_coeff(kp, vec),
        "f_hat": box_fourier_coeff(kp, vec) ** 2,
        "multiplier_radius": multiplier_radius(kp),
        "first_zero_radius": first_profile_zero(kp.dim) / (2.0 * math.pi * kp.delta),
    }
