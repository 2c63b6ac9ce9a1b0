"""Homogeneous Besov seminorms, Sobolev norms and inequality verifiers.

The seminorm is the l^q norm over dyadic bands j of 2^{js} ||D_j u||_{L^p},
with the j-sum truncated to the grid's band range; that truncation is the
single discretization caveat, so callers asserting identities should keep
field spectra inside fully resolved bands.

Verifiers come in two kinds. Constant-1 inequalities (the Lebesgue lower
bound, Hoelder interpolation) are checked with slack tolerances; implied-
constant inequalities (embedding, rough Lebesgue comparison, geometric
interpolation, the band-sum convergence bound) return empirical ratios
that are recorded, never asserted against a fixed constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cutoffs import BandRange, DyadicFilterBank
from .spectral import (
    SpectralField,
    _pointwise_magnitude,
    inverse_transform,
    lp_norm,
    require_zero_mean,
)

__all__ = [
    "INF",
    "recip",
    "from_recip",
    "check_exponent",
    "BesovParams",
    "band_magnitudes",
    "band_lp_profile",
    "lq_norm",
    "besov_norm",
    "besov_norm_from_profile",
    "sobolev_norm",
    "sobolev_envelope",
    "verify_embedding",
    "verify_lebesgue_comparison",
    "HolderCheck",
    "verify_interpolation_holder",
    "verify_interpolation_geometric",
    "verify_convergence_bound",
]

INF = math.inf


def check_exponent(p: float, name: str = "p") -> float:
    """Validate an extended-real Lebesgue exponent in [1, inf]."""
    if not p >= 1:
        raise ValueError(f"Lebesgue exponent {name}={p} must satisfy {name} >= 1")
    return float(p)


def recip(p: float) -> float:
    """1/p with 1/inf = 0."""
    return 0.0 if math.isinf(p) else 1.0 / p


def from_recip(r: float) -> float:
    """Inverse of :func:`recip`."""
    if r < -1e-15:
        raise ValueError(f"negative reciprocal exponent {r}")
    return INF if r <= 1e-15 else 1.0 / r


@dataclass(frozen=True)
class BesovParams:
    """Besov triple (s, p, q); derived quantities are always recomputed."""

    s: float
    p: float
    q: float

    def __post_init__(self) -> None:
        check_exponent(self.p, "p")
        check_exponent(self.q, "q")

    def homogeneity_degree(self, n: int) -> float:
        """Dilation degree alpha = n/p - s."""
        return n * recip(self.p) - self.s

    def critical_regularity(self, n: int) -> float:
        """s_p = -1 + n/p, the scaling-critical regularity for this p."""
        return -1.0 + n * recip(self.p)

    def critical_offset(self, n: int) -> float:
        """epsilon = s - s_p; subcritical norms have epsilon > 0."""
        return self.s - self.critical_regularity(n)


def band_magnitudes(
    bank: DyadicFilterBank, u: SpectralField, bands: Optional[BandRange] = None
) -> dict[int, np.ndarray]:
    """Pointwise physical magnitude of each dyadic band of u.

    One inverse transform per band; reuse this table when several L^p
    norms of the same field are needed.
    """
    if bands is None:
        bands = bank.band_range
    out = {}
    for j in bands:
        band = bank.delta_proj(j, u)
        out[j] = _pointwise_magnitude(inverse_transform(band), u.rank)
    return out


def _lp_from_magnitude(mag: np.ndarray, p: float, cell_volume: float) -> float:
    if math.isinf(p):
        return float(np.max(mag))
    if p == 2.0:
        return float(math.sqrt(np.sum(mag * mag) * cell_volume))
    return float((np.sum(mag**p) * cell_volume) ** (1.0 / p))


def band_lp_profile(
    bank: DyadicFilterBank,
    u: SpectralField,
    p: float,
    bands: Optional[BandRange] = None,
    magnitudes: Optional[dict[int, np.ndarray]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(band indices, per-band L^p norms) for u."""
    check_exponent(p, "p")
    if bands is None:
        bands = bank.band_range
    if magnitudes is None:
        magnitudes = band_magnitudes(bank, u, bands)
    js = np.array(list(bands))
    vol = bank.grid.cell_volume
    vals = np.array([_lp_from_magnitude(magnitudes[j], p, vol) for j in js])
    return js, vals


def lq_norm(values: np.ndarray, q: float) -> float:
    """Sequence l^q norm; q = inf is the maximum."""
    check_exponent(q, "q")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    if math.isinf(q):
        return float(np.max(np.abs(values)))
    if q == 1.0:
        return float(np.sum(np.abs(values)))
    if q == 2.0:
        return float(math.sqrt(np.sum(values * values)))
    return float(np.sum(np.abs(values) ** q) ** (1.0 / q))


def besov_norm_from_profile(js: np.ndarray, band_norms: np.ndarray, s: float, q: float) -> float:
    return lq_norm(2.0 ** (js * s) * band_norms, q)


def besov_norm(
    bank: DyadicFilterBank,
    u: SpectralField,
    params: BesovParams,
    bands: Optional[BandRange] = None,
    magnitudes: Optional[dict[int, np.ndarray]] = None,
) -> float:
    """Homogeneous Besov seminorm of a zero-mean field."""
    require_zero_mean(u, "besov_norm input")
    js, vals = band_lp_profile(bank, u, params.p, bands, magnitudes)
    return besov_norm_from_profile(js, vals, params.s, params.q)


def sobolev_norm(u: SpectralField, s: float) -> float:
    """Homogeneous Sobolev norm (sum_k |k|^{2s} |u_hat|^2 / L^n)^{1/2}.

    At s = 0 this agrees with lp_norm(u, 2) by Parseval.
    """
    require_zero_mean(u, "sobolev_norm input")
    grid = u.grid
    kmag = grid.k_magnitude()
    weight = np.zeros(grid.shape)
    nonzero = kmag > 0
    weight[nonzero] = kmag[nonzero] ** (2.0 * s)
    comp_axes = tuple(range(u.rank))
    density = np.sum(np.abs(u.coeffs) ** 2, axis=comp_axes) if u.rank else np.abs(u.coeffs) ** 2
    return float(math.sqrt(np.sum(weight * density) / grid.volume))


def sobolev_envelope(bank: DyadicFilterBank, s: float) -> tuple[float, float]:
    """Shell-computed bounds for the ratio Besov(s,2,2) / Sobolev(s).

    For every zero-mean field the ratio lies in [c_lo, c_hi] where
    c_{lo/hi}^2 are the min/max over resolved shells |k| of
    sum_j 4^{js} phi^2(2^-j |k|) / |k|^{2s}; this is exact by Parseval.
    """
    grid = bank.grid
    kmag = grid.k_magnitude()
    mags = np.unique(kmag[kmag > 0])
    total = np.zeros_like(mags)
    for j in bank.band_range:
        phi = bank.profile.phi(mags * 2.0 ** (-j))
        total = total + 4.0 ** (j * s) * phi * phi / mags ** (2.0 * s)
    return float(math.sqrt(np.min(total))), float(math.sqrt(np.max(total)))


def verify_embedding(
    bank: DyadicFilterBank,
    u: SpectralField,
    p1: float,
    p2: float,
    q1: float,
    q2: float,
    delta: float,
) -> Optional[float]:
    """Ratio of the two sides of the scaling-matched embedding.

    Returns ||u||_{B^{n/p2+delta}_{p2,q2}} / ||u||_{B^{n/p1+delta}_{p1,q1}}
    for p1 <= p2, q1 <= q2, or None when the denominator vanishes. The
    corpus-level assertion is boundedness; the constant is not asserted.
    """
    if not (p1 <= p2 and q1 <= q2):
        raise ValueError("embedding requires p1 <= p2 and q1 <= q2")
    require_zero_mean(u)
    n = bank.grid.n
    mags = band_magnitudes(bank, u)
    js, vals1 = band_lp_profile(bank, u, p1, magnitudes=mags)
    _, vals2 = band_lp_profile(bank, u, p2, magnitudes=mags)
    denom = besov_norm_from_profile(js, vals1, n * recip(p1) + delta, q1)
    if denom == 0.0:
        return None
    numer = besov_norm_from_profile(js, vals2, n * recip(p2) + delta, q2)
    return numer / denom


def verify_lebesgue_comparison(
    bank: DyadicFilterBank, u: SpectralField, p: float
) -> Optional[tuple[float, float]]:
    """(rough ratio, smooth ratio) for the L^p vs Besov comparisons.

    rough  = ||u||_{B^0_{p,inf}} / ||u||_{L^p}   (implied constant, recorded)
    smooth = ||u||_{L^p} / ||u||_{B^0_{p,1}}     (<= 1 up to rounding)
    """
    require_zero_mean(u)
    norm_p = lp_norm(u, p)
    if norm_p == 0.0:
        return None
    js, vals = band_lp_profile(bank, u, p)
    rough = besov_norm_from_profile(js, vals, 0.0, INF) / norm_p
    smooth = norm_p / besov_norm_from_profile(js, vals, 0.0, 1.0)
    return rough, smooth


@dataclass
class HolderCheck:
    """One evaluation of the Hoelder interpolation inequality (constant 1)."""

    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def relative_slack(self) -> float:
        return self.slack / self.rhs if self.rhs > 0 else 0.0


def interpolated_triple(a: BesovParams, b: BesovParams, lam: float) -> BesovParams:
    """The (s, p, q) triple interpolated between a and b with weight lam."""
    s = lam * a.s + (1.0 - lam) * b.s
    p = from_recip(lam * recip(a.p) + (1.0 - lam) * recip(b.p))
    q = from_recip(lam * recip(a.q) + (1.0 - lam) * recip(b.q))
    return BesovParams(s, p, q)


def verify_interpolation_holder(
    bank: DyadicFilterBank,
    u: SpectralField,
    a: BesovParams,
    b: BesovParams,
    lam: float,
) -> HolderCheck:
    """Evaluate ||u||_interp <= ||u||_a^lam ||u||_b^{1-lam} (constant 1)."""
    if not (0.0 < lam < 1.0):
        raise ValueError("interpolation weight must lie strictly in (0, 1)")
    mid = interpolated_triple(a, b, lam)
    mags = band_magnitudes(bank, u)
    lhs = besov_norm(bank, u, mid, magnitudes=mags)
    na = besov_norm(bank, u, a, magnitudes=mags)
    nb = besov_norm(bank, u, b, magnitudes=mags)
    return HolderCheck(lhs=lhs, rhs=na**lam * nb ** (1.0 - lam))


def verify_interpolation_geometric(
    bank: DyadicFilterBank,
    u: SpectralField,
    p: float,
    s1: float,
    s2: float,
    lam: float,
) -> Optional[float]:
    """Normalized ratio for the geometric-series interpolation bound.

    Compares ||u||_{B^{lam s1+(1-lam)s2}_{p,1}} against
    (1/(lam(1-lam)(s2-s1))) ||u||^lam_{B^{s1}_{p,inf}} ||u||^{1-lam}_{B^{s2}_{p,inf}};
    returns LHS * lam(1-lam)(s2-s1) / products, recorded corpus-wide.
    """
    if not s1 < s2:
        raise ValueError("geometric interpolation requires s1 < s2")
    if not (0.0 < lam < 1.0):
        raise ValueError("interpolation weight must lie strictly in (0, 1)")
    require_zero_mean(u)
    mags = band_magnitudes(bank, u)
    js, vals = band_lp_profile(bank, u, p, magnitudes=mags)
    n1 = besov_norm_from_profile(js, vals, s1, INF)
    n2 = besov_norm_from_profile(js, vals, s2, INF)
    if n1 == 0.0 or n2 == 0.0:
        return None
    lhs = besov_norm_from_profile(js, vals, lam * s1 + (1.0 - lam) * s2, 1.0)
    return lhs * lam * (1.0 - lam) * (s2 - s1) / (n1**lam * n2 ** (1.0 - lam))


def verify_convergence_bound(
    bank: DyadicFilterBank,
    pieces: Sequence[tuple[int, SpectralField]],
    annulus: tuple[float, float],
    s: float,
    p: float,
    q: float,
) -> Optional[float]:
    """Ratio for the band-supported series bound.

    ``pieces`` are (j, u_j) with spectrum of u_j inside 2^j * annulus
    (checked spectrally; violation raises). Returns
    ||sum u_j||_{B^s_{p,q}} / || 2^{js} ||u_j||_{L^p} ||_{l^q}, or None for
    an all-zero family.
    """
    inner, outer = annulus
    if not (0 < inner < outer):
        raise ValueError("annulus radii must satisfy 0 < inner < outer")
    if not pieces:
        return None
    grid = bank.grid
    kmag = grid.k_magnitude()
    total = None
    seq = []
    for j, piece in pieces:
        scale = 2.0**j
        outside = (kmag < inner * scale) | (kmag > outer * scale)
        energy = float(np.sum(np.abs(piece.coeffs) ** 2))
        stray = float(np.sum(np.abs(piece.coeffs[..., outside]) ** 2))
        if energy > 0 and stray > 1e-24 * energy:
            raise ValueError(f"piece at j={j} has spectrum outside 2^{j} x annulus {annulus}")
        seq.append(2.0 ** (j * s) * lp_norm(piece, p))
        total = piece if total is None else total + piece
    denom = lq_norm(np.array(seq), q)
    if denom == 0.0:
        return None
    require_zero_mean(total)
    numer = besov_norm(bank, total, BesovParams(s, p, q))
    return numer / denom
