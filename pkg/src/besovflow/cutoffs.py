"""Dyadic frequency cutoffs and the Littlewood-Paley filter bank.

The low-pass profile chi is a radial C-infinity step built from the
standard exp(-1/t) bump: chi = 1 on the ball of radius 3/4, chi = 0
outside radius 4/3. The band profile is the telescoped difference

    phi(xi) = chi(xi/2) - chi(xi),

supported on the annulus 3/4 <= |xi| <= 8/3, which makes both partition
identities

    chi(xi) + sum_{j>=0} phi(2^-j xi) = 1,
    sum_{j in Z} phi(2^-j xi) = 1   (xi != 0)

hold exactly by construction. The filter bank applies chi(2^-j D) and
phi(2^-j D) as Fourier multipliers, caching the multiplier arrays per
band; a profile is immutable and safe to share across threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .spectral import GridSpec, SpectralField, lp_norm, gradient

__all__ = [
    "CHI_FLAT_RADIUS",
    "CHI_SUPPORT_RADIUS",
    "BAND_INNER",
    "BAND_OUTER",
    "smoothstep",
    "CutoffProfile",
    "build_cutoffs",
    "BandRange",
    "DyadicFilterBank",
    "BernsteinReport",
    "verify_bernstein",
]

CHI_FLAT_RADIUS = 0.75  # chi == 1 inside this radius
CHI_SUPPORT_RADIUS = 4.0 / 3.0  # chi == 0 beyond this radius
BAND_INNER = 0.75  # phi support: the annulus [3/4, 8/3]
BAND_OUTER = 8.0 / 3.0


def _bump(t: np.ndarray) -> np.ndarray:
    """exp(-1/t) for t > 0, 0 otherwise; C-infinity on the real line."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1."""
    a = _bump(np.asarray(t, dtype=float))
    b = _bump(1.0 - np.asarray(t, dtype=float))
    return a / (a + b)


@dataclass(frozen=True)
class CutoffProfile:
    """Radial profiles chi (low-pass) and phi (band) with a dense table.

    ``smoothing`` scales the tabulation density only; the supports and the
    transition shape are fixed by construction.
    """

    smoothing: float = 1.0
    table_radii: np.ndarray = field(repr=False, default=None)
    table_chi: np.ndarray = field(repr=False, default=None)
    table_phi: np.ndarray = field(repr=False, default=None)

    def chi(self, radius) -> np.ndarray:
        """Low-pass profile: 1 on [0, 3/4], 0 on [4/3, inf)."""
        rho = np.asarray(radius, dtype=float)
        t = (CHI_SUPPORT_RADIUS - rho) / (CHI_SUPPORT_RADIUS - CHI_FLAT_RADIUS)
        return smoothstep(t)

    def phi(self, radius) -> np.ndarray:
        """Band profile chi(r/2) - chi(r), supported on [3/4, 8/3]."""
        rho = np.asarray(radius, dtype=float)
        return self.chi(rho / 2.0) - self.chi(rho)

    def export_csv(self, path: Union[str, Path], samples: int = 10_000) -> None:
        """Write (radius, chi, phi) rows for cross-implementation comparison."""
        radii = np.linspace(0.0, 1.25 * BAND_OUTER, samples)
        chi = self.chi(radii)
        phi = self.phi(radii)
        with open(path, "w") as fh:
            fh.write("radius,chi,phi\n")
            for r, c, p in zip(radii, chi, phi):
                fh.write(f"{r!r},{c!r},{p!r}\n")


def build_cutoffs(smoothing: float = 1.0) -> CutoffProfile:
    """Construct the cutoff pair (chi, phi) with a dense radial table."""
    if not smoothing > 0:
        raise ValueError("smoothing must be positive")
    profile = CutoffProfile(smoothing=smoothing)
    points = max(1024, int(round(4096 * smoothing)))
    radii = np.linspace(0.0, 1.25 * BAND_OUTER, points)
    object.__setattr__(profile, "table_radii", radii)
    object.__setattr__(profile, "table_chi", profile.chi(radii))
    object.__setattr__(profile, "table_phi", profile.phi(radii))
    return profile


@dataclass(frozen=True)
class BandRange:
    """Dyadic indices j_min..j_max whose annuli meet the resolved modes."""

    j_min: int
    j_max: int

    def __iter__(self):
        return iter(range(self.j_min, self.j_max + 1))

    def __len__(self) -> int:
        return self.j_max - self.j_min + 1

    def __contains__(self, j: int) -> bool:
        return self.j_min <= j <= self.j_max


class DyadicFilterBank:
    """Littlewood-Paley projections on a fixed grid with cached multipliers.

    The multiplier cache is initialized lazily under a lock (single-writer)
    and is safe for concurrent reads afterwards.
    """

    def __init__(self, grid: GridSpec, profile: Optional[CutoffProfile] = None):
        self.grid = grid
        self.profile = profile if profile is not None else build_cutoffs()
        self._cache: dict[tuple[str, int], np.ndarray] = {}
        self._lock = threading.Lock()
        self.band_range = self._compute_band_range()

    def _compute_band_range(self) -> BandRange:
        mags = self.grid.k_magnitude()
        nonzero = np.unique(mags[mags > 0])
        # direct support test: keep j iff some resolved magnitude lies in
        # the closed annulus 2^j [3/4, 8/3]
        js = []
        j_lo = math.floor(math.log2(float(nonzero[0]) / BAND_OUTER)) - 1
        j_hi = math.ceil(math.log2(float(nonzero[-1]) / BAND_INNER)) + 1
        for j in range(j_lo, j_hi + 1):
            scale = 2.0**j
            if np.any((nonzero >= BAND_INNER * scale) & (nonzero <= BAND_OUTER * scale)):
                js.append(j)
        return BandRange(min(js), max(js))

    def _multiplier(self, kind: str, j: int) -> np.ndarray:
        key = (kind, j)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._cache.get(key)
            if cached is not None:
                return cached
            radii = self.grid.k_magnitude() * (2.0 ** (-j))
            values = self.profile.chi(radii) if kind == "chi" else self.profile.phi(radii)
            values.flags.writeable = False
            self._cache[key] = values
            return values

    def chi_multiplier(self, j: int) -> np.ndarray:
        return self._multiplier("chi", j)

    def phi_multiplier(self, j: int) -> np.ndarray:
        return self._multiplier("phi", j)

    def s_proj(self, j: int, u: SpectralField) -> SpectralField:
        """Low-frequency cut: chi(2^-j D) u."""
        return SpectralField(u.grid, u.coeffs * self.chi_multiplier(j))

    def delta_proj(self, j: int, u: SpectralField) -> SpectralField:
        """Dyadic band: phi(2^-j D) u, spectrum in 2^j [3/4, 8/3]."""
        return SpectralField(u.grid, u.coeffs * self.phi_multiplier(j))

    def fully_resolved(self, j: int) -> bool:
        """True when the band annulus lies inside the symmetric resolved ball.

        Bands touching the Nyquist shell are still computed, but carry
        truncation artifacts; reconstruction-style tests should restrict
        field spectra to fully resolved bands.
        """
        k_safe = self.grid.k_fundamental * (self.grid.N // 2 - 1)
        return BAND_OUTER * 2.0**j <= k_safe

    def bands(self) -> Iterable[int]:
        return iter(self.band_range)

    def reconstruct(self, u: SpectralField) -> SpectralField:
        """Sum of all dyadic bands; equals u exactly for zero-mean grid fields."""
        total = np.zeros(self.grid.shape)
        for j in self.band_range:
            total = total + self.phi_multiplier(j)
        return SpectralField(u.grid, u.coeffs * total)

    def partition_defect(self) -> float:
        """Max |sum_j phi(2^-j k) - 1| over resolved nonzero wavenumbers."""
        total = np.zeros(self.grid.shape)
        for j in self.band_range:
            total = total + self.phi_multiplier(j)
        nonzero = self.grid.k_magnitude() > 0
        return float(np.max(np.abs(total[nonzero] - 1.0)))

    def squared_partition_bounds(self) -> tuple[float, float]:
        """(min, max) of sum_j phi^2(2^-j k) over resolved nonzero modes."""
        total = np.zeros(self.grid.shape)
        for j in self.band_range:
            m = self.phi_multiplier(j)
            total = total + m * m
        nonzero = self.grid.k_magnitude() > 0
        return float(np.min(total[nonzero])), float(np.max(total[nonzero]))


@dataclass
class BernsteinReport:
    """Ratios of the three band-limited norm comparisons.

    ``None`` marks a skipped ratio (zero band). Callers assert boundedness
    over a corpus; no universal constant is asserted here.
    """

    projection_ratio: Optional[float]  # ||S_j u||_p v ||D_j u||_p over ||u||_p
    multiplier_ratio: Optional[float]  # ||rho(D) D_j u||_q / (2^(j lam) 2^(j(n/p-n/q)) ||D_j u||_p)
    inverse_gradient_ratio: Optional[float]  # ||D_j u||_p / (2^-j ||grad D_j u||_p)


def verify_bernstein(
    bank: DyadicFilterBank,
    j: int,
    u: SpectralField,
    p: float,
    q: float,
    symbol: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    degree: float = 1.0,
) -> BernsteinReport:
    """Measure the three Bernstein-type ratios for band j.

    ``symbol`` is a radial positive-homogeneous symbol of the given
    ``degree`` (default |k|, degree 1). Requires p <= q.
    """
    if not (1 <= p <= q):
        raise ValueError("need 1 <= p <= q")
    norm_u = lp_norm(u, p)
    band = bank.delta_proj(j, u)
    band_p = lp_norm(band, p)
    if norm_u == 0.0:
        return BernsteinReport(None, None, None)
    low = bank.s_proj(j, u)
    ratio1 = max(lp_norm(low, p), band_p) / norm_u
    if band_p == 0.0:
        return BernsteinReport(ratio1, None, None)
    n = bank.grid.n
    if symbol is None:
        symbol_values = bank.grid.k_magnitude()
    else:
        symbol_values = np.asarray(symbol(bank.grid.k_magnitude()))
        symbol_values = np.where(bank.grid.k_magnitude() > 0, symbol_values, 0.0)
    shaped = SpectralField(u.grid, band.coeffs * symbol_values)
    scale = 2.0 ** (j * degree) * 2.0 ** (j * (n / p - n / q))
    ratio2 = lp_norm(shaped, q) / (scale * band_p)
    grad_norm = lp_norm(gradient(band), p)
    ratio3 = band_p / (2.0 ** (-j) * grad_norm) if grad_norm > 0 else None
    return BernsteinReport(ratio1, ratio2, ratio3)
