"""
Weyl spectra, exponential-sum functionals and bound certificates.

Certificates compare the normalized sum of |S_N(ℓ)|² over a frequency
window with its theoretical ceiling. Alongside the asymptotic bound each
certificate carries a finite-N bound obtained from the kernel identity with
the measured smoothed pair statistic; that one holds for every point set.
"""
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import structlog

from app.config import settings
from app.core import ball_volume
from app.correlation import smoothed_pair_statistic
from app.errors import InputError
from app.kernels import multiplier_constant, require_supported_dim
from app.models import PointSet, Verdict
from app.schemas import BoundCertificate, SpectrumSummary
from app.weyl import integer_cutoff, lattice_ball, squared_magnitudes, weyl_sum  # noqa: F401

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class WeylSpectrum:
    """|S_N(ℓ)|² for every ℓ of a lattice ball, both signs stored."""

    dim: int
    n: int
    cutoff: float
    ells: np.ndarray
    values: np.ndarray

    def entries(self) -> Dict[Tuple[int, ...], float]:
        return {tuple(int(c) for c in ell): float(v) for ell, v in zip(self.ells, self.values)}

    def __len__(self) -> int:
        return int(self.ells.shape[0])


def compute_spectrum(ps: PointSet, cutoff: float) -> WeylSpectrum:
    """Spectrum over lattice_ball(d, cutoff)."""
    ells = lattice_ball(ps.dim, cutoff)
    return WeylSpectrum(dim=ps.dim, n=ps.n, cutoff=cutoff, ells=ells, values=squared_magnitudes(ps, ells))


def _positive_frequencies(count: int) -> np.ndarray:
    return np.arange(1, count + 1, dtype=np.int64)[:, None]


def _check_t(t: float) -> None:
    if not (t > 0) or not math.isfinite(t):
        raise InputError(f"t must be positive and finite, got {t}")


def _finite_bound(ps: PointSet, delta: float, bound: float, scale: float) -> Optional[float]:
    if not (0.0 < delta < 0.25) or ps.n < 2:
        return None
    smoothed = smoothed_pair_statistic(ps, delta).value
    return bound + scale * (smoothed - 1.0)


def ppc_functional(ps: PointSet, t: float, c2: float | None = None) -> BoundCertificate:
    """
    d = 1: (1/N²) Σ_{1<=ℓ<=N/(8t)} |S_N(ℓ)|² against 1/(2t).
    d >= 2: (1/N²) Σ_{1<=‖ℓ‖<=N^{1/d}/t} |S_N(ℓ)|² against c_d/t^d.
    """
    _check_t(t)
    n, d = ps.n, ps.dim
    nf = float(n)

    if d == 1:
        cutoff = integer_cutoff(nf / (8.0 * t))
        ells = _positive_frequencies(max(cutoff, 0))
        bound = 1.0 / (2.0 * t)
        iid = 1.0 / (8.0 * t)
        constants = {"c_1": 0.5}
        finite = _finite_bound(ps, t / nf, bound, 1.0)
    else:
        require_supported_dim(d)
        c2 = settings.MULTIPLIER_C2 if c2 is None else c2
        kappa = multiplier_constant(d, c2)
        c_d = 1.0 / (ball_volume(d) * kappa ** d * c2)
        cutoff = nf ** (1.0 / d) / t
        ells = lattice_ball(d, cutoff)
        bound = c_d / t ** d
        iid = ells.shape[0] / nf
        constants = {"c_d": c_d, "c2": c2, "kappa": kappa}
        finite = _finite_bound(ps, kappa * t * nf ** (-1.0 / d), bound, 1.0 / c2)

    raw = math.fsum(squared_magnitudes(ps, ells).tolist()) if ells.shape[0] else 0.0
    functional = raw / nf ** 2
    cert = BoundCertificate(
        t=t,
        alpha=1.0,
        n=n,
        dim=d,
        cutoff_used=float(cutoff),
        terms=int(ells.shape[0]),
        raw_sum=raw,
        functional=functional,
        bound=bound,
        iid_reference=iid,
        finite_n_bound=finite,
        verdict=Verdict.WITHIN_BOUND if functional <= bound else Verdict.EXCEEDS_BOUND,
        constants_used=constants,
    )
    logger.info("ppc_functional", n=n, dim=d, t=t, terms=cert.terms, functional=functional, bound=bound)
    return cert


def weak_functional(ps: PointSet, t: float, alpha: float, c_alpha: float | None = None) -> BoundCertificate:
    """
    Σ_{1<=ℓ<=N^α/t} |S_N(ℓ)|², raw and divided by N^{1+α}/t.

    c_α is an implementation constant, so no verdict is issued; the finite-N
    bound uses δ = t/(8N^α), which keeps ℓδ <= 1/8 across the window.
    """
    if ps.dim != 1:
        raise InputError(f"weak functional is defined for d = 1 only, got d={ps.dim}")
    if not (0.0 < alpha <= 1.0):
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    _check_t(t)
    c_alpha = settings.WEAK_C_ALPHA if c_alpha is None else c_alpha
    nf = float(ps.n)
    window = nf ** alpha
    cutoff = integer_cutoff(window / t)
    ells = _positive_frequencies(max(cutoff, 0))
    raw = math.fsum(squared_magnitudes(ps, ells).tolist()) if ells.shape[0] else 0.0
    norm = nf * window / t
    finite = _finite_bound(ps, t / (8.0 * window), 4.0, t * nf / window)

    cert = BoundCertificate(
        t=t,
        alpha=alpha,
        n=ps.n,
        dim=1,
        cutoff_used=float(cutoff),
        terms=int(ells.shape[0]),
        raw_sum=raw,
        functional=raw / norm,
        bound=c_alpha,
        iid_reference=nf * ells.shape[0] / norm,
        finite_n_bound=finite,
        verdict=None,
        constants_used={"c_alpha": c_alpha},
    )
    logger.info("weak_functional", n=ps.n, t=t, alpha=alpha, terms=cert.terms, ratio=cert.functional)
    return cert


@dataclass(frozen=True)
class WeylScan:
    """Normalized magnitudes |S_N(ℓ)|/N over a lattice ball."""

    spectrum: WeylSpectrum
    magnitudes: np.ndarray
    t: Optional[float] = None

    @property
    def max_magnitude(self) -> float:
        return float(self.magnitudes.max()) if self.magnitudes.size else 0.0

    @property
    def argmax(self) -> list:
        if not self.magnitudes.size:
            return []
        return self.spectrum.ells[int(np.argmax(self.magnitudes))].tolist()

    def as_dict(self) -> Dict[Tuple[int, ...], float]:
        return {tuple(int(c) for c in ell): float(v) for ell, v in zip(self.spectrum.ells, self.magnitudes)}

    def summary(self) -> SpectrumSummary:
        sp = self.spectrum
        mean_square = float(sp.values.mean() / sp.n) if len(sp) else 0.0
        return SpectrumSummary(
            dim=sp.dim,
            n=sp.n,
            cutoff=sp.cutoff,
            frequencies=len(sp),
            max_magnitude=self.max_magnitude,
            argmax=self.argmax,
            mean_square=mean_square,
            t=self.t,
            magnitude_ceiling=None if self.t is None else 1.0 / math.sqrt(2.0 * self.t),
        )


def weyl_criterion_scan(ps: PointSet, lmax: float, t: float | None = None) -> WeylScan:
    """|S_N(ℓ)|/N over lattice_ball(d, lmax); with t, also the ceiling 1/√(2t)."""
    if not (lmax >= 1):
        raise InputError(f"lmax must be >= 1, got {lmax}")
    if t is not None:
        _check_t(t)
    spectrum = compute_spectrum(ps, lmax)
    magnitudes = np.sqrt(spectrum.values) / ps.n
    scan = WeylScan(spectrum=spectrum, magnitudes=magnitudes, t=t)
    logger.info("weyl_scan", n=ps.n, dim=ps.dim, lmax=lmax, frequencies=len(spectrum), max=scan.max_magnitude)
    return scan
