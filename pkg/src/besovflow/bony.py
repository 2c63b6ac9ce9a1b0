"""Dealiased pointwise products and the Bony product decomposition.

Products are computed pseudo-spectrally with the 2/3 rule (modes with any
axis index above N//3 are zeroed after the product); this is the single
aliasing policy used repo-wide. For fields whose spectra satisfy the
dealias-safe cap (see :func:`besovflow.fields.dealias_safe_index_cap`),
no true product mode is clipped, and the decomposition

    u v = T(u, v) + T(v, u) + R(u, v)

holds to rounding: the low-high paraproduct sums S_{j-1}u D_j v, the
remainder sums the near-diagonal pairs D_j u D_{j-nu} v, |nu| <= 1, and
the dyadic partition of unity makes the pair bookkeeping exact.

Sums over bands run in ascending j, so results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .besov import (
    BesovParams,
    besov_norm,
    besov_norm_from_profile,
    band_lp_profile,
    check_exponent,
    from_recip,
    lp_norm,
    recip,
)
from .cutoffs import DyadicFilterBank
from .spectral import (
    GridSpec,
    SpectralField,
    _fftn,
    _ifftn,
    forward_transform,
    inverse_transform,
)

__all__ = [
    "dealias_mask",
    "dealias",
    "pointwise_product",
    "paraproduct",
    "remainder",
    "BonyPieces",
    "bony_decomposition",
    "ParaproductRatios",
    "monitor_paraproduct_estimates",
    "RemainderRatios",
    "monitor_remainder_estimates",
]


@lru_cache(maxsize=32)
def dealias_mask(grid: GridSpec) -> np.ndarray:
    """2/3-rule retention mask: keep modes with all |index_i| <= N//3."""
    idx = np.rint(np.fft.fftfreq(grid.N) * grid.N).astype(int)
    mesh = np.stack(np.meshgrid(*([idx] * grid.n), indexing="ij"))
    mask = np.all(np.abs(mesh) <= grid.N // 3, axis=0)
    mask.flags.writeable = False
    return mask


def dealias(field: SpectralField) -> SpectralField:
    return SpectralField(field.grid, field.coeffs * dealias_mask(field.grid))


def pointwise_product(u: SpectralField, v: SpectralField) -> SpectralField:
    """Dealiased physical-space product of two fields on the same grid.

    Component shapes must broadcast (scalar times anything, or matching
    shapes multiplied elementwise).
    """
    if u.grid != v.grid:
        raise ValueError(f"grid mismatch: {u.grid} vs {v.grid}")
    prod = inverse_transform(u) * inverse_transform(v)
    return dealias(forward_transform(u.grid, prod))


def _band_physicals(bank: DyadicFilterBank, u: SpectralField) -> dict[int, np.ndarray]:
    """Real physical samples of every dyadic band of a scalar field."""
    scale = 1.0 / bank.grid.cell_volume
    out = {}
    for j in bank.band_range:
        coeffs = u.coeffs * bank.phi_multiplier(j)
        out[j] = np.real(_ifftn(coeffs, bank.grid.n)) * scale
    return out


def _require_scalar(field: SpectralField, what: str) -> None:
    if field.rank != 0:
        raise ValueError(f"{what} requires scalar fields; got rank {field.rank}")


def paraproduct(
    bank: DyadicFilterBank,
    u: SpectralField,
    v: SpectralField,
    u_bands: Optional[dict[int, np.ndarray]] = None,
) -> SpectralField:
    """Low-high paraproduct T(u, v) = sum_j S_{j-1} u  D_j v (dealiased).

    The low-pass factors are accumulated by telescoping the band fields,
    which agrees bit-exactly with the chi multiplier on resolved modes.
    ``u_bands`` may pass precomputed band physicals of u for reuse.
    """
    _require_scalar(u, "paraproduct")
    _require_scalar(v, "paraproduct")
    if u.grid != v.grid:
        raise ValueError("grid mismatch")
    grid = bank.grid
    bands_u = u_bands if u_bands is not None else _band_physicals(bank, u)
    acc = np.zeros(grid.shape)
    running = np.zeros(grid.shape)  # sum of u-bands at indices <= j - 2
    scale = 1.0 / grid.cell_volume
    for j in bank.band_range:
        band_v = np.real(_ifftn(v.coeffs * bank.phi_multiplier(j), grid.n)) * scale
        acc = acc + running * band_v
        low_entry = bands_u.get(j - 1)
        if low_entry is not None:
            running = running + low_entry
    coeffs = _fftn(acc.astype(np.complex128), grid.n) * grid.cell_volume
    return dealias(SpectralField(grid, coeffs))


def remainder(
    bank: DyadicFilterBank,
    u: SpectralField,
    v: SpectralField,
    u_bands: Optional[dict[int, np.ndarray]] = None,
    v_bands: Optional[dict[int, np.ndarray]] = None,
) -> SpectralField:
    """Diagonal remainder R(u, v) = sum_j sum_{|nu|<=1} D_j u D_{j-nu} v."""
    _require_scalar(u, "remainder")
    _require_scalar(v, "remainder")
    if u.grid != v.grid:
        raise ValueError("grid mismatch")
    grid = bank.grid
    bands_u = u_bands if u_bands is not None else _band_physicals(bank, u)
    bands_v = v_bands if v_bands is not None else _band_physicals(bank, v)
    acc = np.zeros(grid.shape)
    for j in bank.band_range:
        bu = bands_u[j]
        for nu in (-1, 0, 1):
            bv = bands_v.get(j - nu)
            if bv is not None:
                acc = acc + bu * bv
    coeffs = _fftn(acc.astype(np.complex128), grid.n) * grid.cell_volume
    return dealias(SpectralField(grid, coeffs))


@dataclass
class BonyPieces:
    """The three Bony pieces and the dealiased product they reassemble."""

    low_high: SpectralField  # T(u, v)
    high_low: SpectralField  # T(v, u)
    diagonal: SpectralField  # R(u, v)
    product: SpectralField  # dealiased u v

    def identity_defect(self) -> float:
        """Relative L^2 defect of T(u,v) + T(v,u) + R(u,v) - uv."""
        total = self.low_high + self.high_low + self.diagonal - self.product
        scale = lp_norm(self.product, 2)
        defect = lp_norm(total, 2)
        return defect / scale if scale > 0 else defect


def bony_decomposition(bank: DyadicFilterBank, u: SpectralField, v: SpectralField) -> BonyPieces:
    return BonyPieces(
        low_high=paraproduct(bank, u, v),
        high_low=paraproduct(bank, v, u),
        diagonal=remainder(bank, u, v),
        product=pointwise_product(u, v),
    )


def _validate_split(s1: float, s2: float, p1: float, p2: float, q1: float, q2: float):
    """Exponent arithmetic s = s1+s2, 1/p = 1/p1+1/p2, 1/q = 1/q1+1/q2."""
    for name, value in (("p1", p1), ("p2", p2), ("q1", q1), ("q2", q2)):
        check_exponent(value, name)
    rp = recip(p1) + recip(p2)
    rq = recip(q1) + recip(q2)
    if rp > 1.0 + 1e-12:
        raise ValueError(f"1/p1 + 1/p2 = {rp} exceeds 1; target exponent p < 1")
    if rq > 1.0 + 1e-12:
        raise ValueError(f"1/q1 + 1/q2 = {rq} exceeds 1; target exponent q < 1")
    return s1 + s2, from_recip(rp), from_recip(rq)


@dataclass
class ParaproductRatios:
    """Empirical LHS/RHS ratios for the two paraproduct bounds.

    ``None`` with a reason in ``skips`` marks an inapplicable or degenerate
    case. Ratios are recorded corpus-wide; no constant is asserted.
    """

    lebesgue_form: Optional[float]  # vs ||u||_{L^p1} ||v||_{B^s_{p2,q}}
    negative_index_form: Optional[float]  # vs (1/-s1) ||u||_{B^s1} ||v||_{B^s2}, s1 < 0
    skips: dict[str, str]


def monitor_paraproduct_estimates(
    bank: DyadicFilterBank,
    u: SpectralField,
    v: SpectralField,
    s1: float,
    s2: float,
    p1: float,
    p2: float,
    q1: float,
    q2: float,
) -> ParaproductRatios:
    s, p, q = _validate_split(s1, s2, p1, p2, q1, q2)
    skips: dict[str, str] = {}
    tuv = paraproduct(bank, u, v)
    lhs = besov_norm(bank, tuv, BesovParams(s, p, q))

    ratio1 = None
    denom1 = lp_norm(u, p1) * besov_norm(bank, v, BesovParams(s, p2, q))
    if denom1 > 0:
        ratio1 = lhs / denom1
    else:
        skips["lebesgue_form"] = "zero right-hand side"

    ratio2 = None
    if s1 < 0:
        denom2 = (
            (1.0 / (-s1))
            * besov_norm(bank, u, BesovParams(s1, p1, q1))
            * besov_norm(bank, v, BesovParams(s2, p2, q2))
        )
        if denom2 > 0:
            ratio2 = lhs / denom2
        else:
            skips["negative_index_form"] = "zero right-hand side"
    else:
        skips["negative_index_form"] = f"requires s1 < 0 (got s1={s1})"
    return ParaproductRatios(ratio1, ratio2, skips)


@dataclass
class RemainderRatios:
    """Empirical LHS/RHS ratios for the two remainder bounds."""

    positive_sum_form: Optional[float]  # vs (1/s) ||u|| ||v||, s > 0
    endpoint_form: Optional[float]  # into B^s_{p,inf}, needs 1/q1 + 1/q2 = 1, s >= 0
    skips: dict[str, str]


def monitor_remainder_estimates(
    bank: DyadicFilterBank,
    u: SpectralField,
    v: SpectralField,
    s1: float,
    s2: float,
    p1: float,
    p2: float,
    q1: float,
    q2: float,
) -> RemainderRatios:
    s, p, q = _validate_split(s1, s2, p1, p2, q1, q2)
    skips: dict[str, str] = {}
    ruv = remainder(bank, u, v)
    norm_u = besov_norm(bank, u, BesovParams(s1, p1, q1))
    norm_v = besov_norm(bank, v, BesovParams(s2, p2, q2))
    products = norm_u * norm_v

    ratio3 = None
    if s > 0:
        if products > 0:
            lhs = besov_norm(bank, ruv, BesovParams(s, p, q))
            ratio3 = lhs * s / products
        else:
            skips["positive_sum_form"] = "zero right-hand side"
    else:
        skips["positive_sum_form"] = f"requires s > 0 (got s={s})"

    ratio4 = None
    if abs(recip(q1) + recip(q2) - 1.0) > 1e-12:
        skips["endpoint_form"] = "requires 1/q1 + 1/q2 = 1"
    elif s < 0:
        skips["endpoint_form"] = f"requires s >= 0 (got s={s})"
    elif products > 0:
        js, vals = band_lp_profile(bank, ruv, p)
        ratio4 = besov_norm_from_profile(js, vals, s, math.inf) / products
    else:
        skips["endpoint_form"] = "zero right-hand side"
    return RemainderRatios(ratio3, ratio4, skips)
