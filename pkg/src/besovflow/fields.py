"""Field constructors: seeded random corpora and analytic test fields.

Random fields are built from white real noise shaped by a radial spectral
envelope, so Hermitian symmetry holds by construction. The default
envelope caps every axis index at N//6, which keeps pointwise products of
two corpus fields entirely inside the 2/3-rule dealiasing mask
("dealias-safe").
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .spectral import (
    GridSpec,
    SpectralField,
    forward_transform,
    leray_project,
    lp_norm,
)

__all__ = [
    "dealias_safe_index_cap",
    "random_field",
    "taylor_green",
    "single_mode",
    "gradient_of_random_scalar",
    "wave_packet",
]


def dealias_safe_index_cap(grid: GridSpec) -> int:
    """Largest per-axis index such that products stay alias-free."""
    return grid.N // 6


def _axis_indices(grid: GridSpec) -> np.ndarray:
    idx = np.fft.fftfreq(grid.N) * grid.N
    return np.rint(idx).astype(int)


def _index_mesh(grid: GridSpec) -> np.ndarray:
    idx = _axis_indices(grid)
    return np.stack(np.meshgrid(*([idx] * grid.n), indexing="ij"))


def random_field(
    grid: GridSpec,
    rng: np.random.Generator,
    rank: int = 0,
    kmax_index: Optional[int] = None,
    slope: float = 0.0,
    k_window: Optional[tuple[float, float]] = None,
    divergence_free: bool = False,
    normalize: bool = True,
) -> SpectralField:
    """Seeded random zero-mean field with a shaped, capped spectrum.

    Parameters
    ----------
    rank:
        0 scalar, 1 vector, 2 tensor (components i.i.d.).
    kmax_index:
        Per-axis index cap; defaults to the dealias-safe cap N//6.
    slope:
        Radial spectral slope beta: coefficients damped by |k|^-beta.
    k_window:
        Optional magnitude window (k_lo, k_hi); modes outside are zeroed.
        Use this to keep spectra inside fully resolved dyadic bands.
    divergence_free:
        Leray-project a vector field (rank must be 1).
    normalize:
        Scale to unit L^2 norm.
    """
    if kmax_index is None:
        kmax_index = dealias_safe_index_cap(grid)
    comp = {0: (), 1: (grid.n,), 2: (grid.n, grid.n)}[rank]
    noise = rng.standard_normal(comp + grid.shape)
    field = forward_transform(grid, noise)

    imesh = _index_mesh(grid)
    keep = np.all(np.abs(imesh) <= kmax_index, axis=0)
    kmag = grid.k_magnitude()
    if k_window is not None:
        keep = keep & (kmag >= k_window[0]) & (kmag <= k_window[1])
    envelope = keep.astype(float)
    if slope != 0.0:
        safe = np.where(kmag > 0, kmag, 1.0)
        envelope = envelope * safe ** (-slope)
    envelope[(0,) * grid.n] = 0.0  # zero mean

    coeffs = field.coeffs * envelope
    out = SpectralField(grid, coeffs)
    if divergence_free:
        if rank != 1:
            raise ValueError("divergence_free requires a vector field")
        out = leray_project(out)
    if normalize:
        norm = lp_norm(out, 2)
        if norm > 0:
            out = out * (1.0 / norm)
    return out


def taylor_green(grid: GridSpec, amplitude: float = 1.0) -> SpectralField:
    """Planar Taylor-Green vortex embedded in n dimensions.

    u = A (sin x1 cos x2, -cos x1 sin x2, 0, ...): divergence-free, and its
    self-advection is a pure gradient, so the exact evolution under the
    standardised equations is u(t) = u(0) e^{-2t} (for L = 2 pi).
    """
    pts = grid.grid_points()
    x, y = pts[0], pts[1]
    samples = np.zeros((grid.n,) + grid.shape)
    samples[0] = amplitude * np.sin(x) * np.cos(y)
    samples[1] = -amplitude * np.cos(x) * np.sin(y)
    return forward_transform(grid, samples)


def single_mode(
    grid: GridSpec,
    index: tuple[int, ...],
    rank: int = 0,
    component: int = 0,
    amplitude: float = 1.0,
    phase: float = 0.0,
) -> SpectralField:
    """Real single-mode field A cos(k.x + phase) (in one component)."""
    if len(index) != grid.n:
        raise ValueError(f"mode index needs {grid.n} entries")
    pts = grid.grid_points()
    k = grid.k_fundamental * np.asarray(index, dtype=float)
    phase_field = np.tensordot(k, pts, axes=(0, 0))
    wave = amplitude * np.cos(phase_field + phase)
    if rank == 0:
        return forward_transform(grid, wave)
    comp = {1: (grid.n,), 2: (grid.n, grid.n)}[rank]
    samples = np.zeros(comp + grid.shape)
    samples[np.unravel_index(component, comp) if rank == 2 else component] = wave
    return forward_transform(grid, samples)


def gradient_of_random_scalar(
    grid: GridSpec, rng: np.random.Generator, kmax_index: Optional[int] = None
) -> SpectralField:
    """Pure-gradient vector field (annihilated by the Leray projection)."""
    from .spectral import gradient

    scalar = random_field(grid, rng, rank=0, kmax_index=kmax_index)
    return gradient(scalar)


def wave_packet(
    grid: GridSpec,
    carrier_index: int = 7,
    envelope_radius_frac: float = 0.22,
    k_window: tuple[float, float] = (3.0, 12.0),
    rank: int = 1,
    divergence_free: bool = True,
) -> SpectralField:
    """Spatially localized, band-limited oscillatory packet.

    Built as cos(kappa x1) (+ shifted copies for vector components) under a
    compactly supported C-infinity spatial envelope centred in the box,
    then hard-limited to the magnitude window ``k_window`` and zero-meaned.
    Used as the profile of synthetic self-similar families, where spatial
    localization keeps fixed-grid rescaling faithful to whole-space
    dilation.
    """
    from .cutoffs import smoothstep

    pts = grid.grid_points()
    center = grid.L / 2.0
    r2 = np.zeros(grid.shape)
    for d in range(grid.n):
        r2 = r2 + (pts[d] - center) ** 2
    r = np.sqrt(r2)
    radius = envelope_radius_frac * grid.L
    envelope = smoothstep((radius - r) / (0.6 * radius))

    kappa = carrier_index * grid.k_fundamental
    comp = {0: (), 1: (grid.n,), 2: (grid.n, grid.n)}[rank]
    samples = np.zeros(comp + grid.shape)
    if rank == 0:
        samples[:] = np.cos(kappa * pts[0]) * envelope
    else:
        flat = samples.reshape((-1,) + grid.shape)
        for c in range(flat.shape[0]):
            axis = c % grid.n
            flat[c] = np.cos(kappa * pts[(axis + 1) % grid.n] + 0.37 * c) * envelope
    out = forward_transform(grid, samples)

    kmag = grid.k_magnitude()
    window = (kmag >= k_window[0] * grid.k_fundamental) & (
        kmag <= k_window[1] * grid.k_fundamental
    )
    coeffs = out.coeffs * window.astype(float)
    out = SpectralField(grid, coeffs)
    if divergence_free and rank == 1:
        out = leray_project(out)
    norm = lp_norm(out, 2)
    if norm > 0:
        out = out * (1.0 / norm)
    return out
