"""Blow-up-rate machinery: index algebra, energy budgets, synthetic
self-similar families, rate fitting and the lower-bound ODE lemma.

The index selection realizes the exponent bookkeeping used to close the
per-band vorticity energy estimate at regularity excess eps in [1, 2):
given (n, eps, r) it picks r1 inside the admissible interval

    I = (2n/r - 4/r, 2n/r) intersect (2n/r - 2 + eps, 2n/r - 2/r + eps)

(midpoint by default), derives r2..r5 and the interpolation weights
mu, nu, lambda, and verifies the identity (r-1) mu + 2 nu = 1 + r eps / 2
before returning. The eps = 2 branch works in the l^1 band ladder and
needs no r1..r5.

No blow-up exists on a finite grid: rate fitting targets synthetic
families u(t) = (T-t)^{-1/2} U(x / sqrt(T-t)) built by rescaling a fixed
localized profile, for which the subcritical norm growth (T-t)^{-eps/2}
is forced by norm homogeneity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Optional, Sequence

import numpy as np

from .besov import BesovParams, band_magnitudes, besov_norm, lq_norm, recip
from .bony import dealias_mask
from .commutator import advective_derivative
from .cutoffs import DyadicFilterBank
from .solver import SolverState, _stretching_tensor, vorticity_from_velocity
from .spectral import (
    SpectralField,
    forward_transform,
    inverse_transform,
    lp_norm,
)

__all__ = [
    "IndexSelection",
    "select_indices",
    "exponent_identity_check",
    "pairing_exponents",
    "NuInterpolation",
    "nu_interpolation_exponents",
    "EnergyBudgetEntry",
    "energy_budget",
    "DiagnosticRecord",
    "dilated_samples",
    "effective_max_wavenumber",
    "synthetic_family_states",
    "synthetic_blowup_family",
    "RateFit",
    "fit_rate",
    "ode_lower_bound",
    "OdeCheck",
    "verify_ode_lemma",
    "QualitativeRow",
    "qualitative_blowup_monitor",
]


# ---------------------------------------------------------------------------
# index selection and exponent algebra


@dataclass(frozen=True)
class IndexSelection:
    """Exponent bookkeeping for the per-band energy estimate.

    For eps < 2 the auxiliary exponents r1..r5 and weights mu, nu are set
    and satisfy the ordering chain r n/(n + 2(r-1)) < r3 < r < r1 <
    r n/(n-2) together with (r-1) mu + 2 nu = 1 + r eps/2; for eps = 2
    they are None and the l^1 ladder (r_tilde = 1) is used instead.
    """

    n: int
    eps: float
    r: float
    r_tilde: float
    r1: Optional[float] = None
    r2: Optional[float] = None
    r3: Optional[float] = None
    r4: Optional[float] = None
    r5: Optional[float] = None
    mu: Optional[float] = None
    nu: Optional[float] = None
    lam: float = 0.0

    @property
    def critical_regularity(self) -> float:
        """s_r = -1 + n/r."""
        return -1.0 + self.n / self.r

    @property
    def band_weight_regularity(self) -> float:
        """The vorticity-level regularity s_r + eps - 1 carried by the bands."""
        return self.critical_regularity + self.eps - 1.0


def admissible_interval(n: int, eps: float, r: float) -> tuple[float, float]:
    """The open interval I for 2n/r1."""
    lo1, hi1 = 2.0 * n / r - 4.0 / r, 2.0 * n / r
    lo2, hi2 = 2.0 * n / r - 2.0 + eps, 2.0 * n / r - 2.0 / r + eps
    return max(lo1, lo2), min(hi1, hi2)


def select_indices(n: int, eps: float, r: float, r1_position: float = 0.5) -> IndexSelection:
    """Choose the full index family for (n, eps, r).

    ``r1_position`` in (0, 1) places 2n/r1 inside the admissible interval
    (0.5 = midpoint, the deterministic default).
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    if not (1.0 <= eps <= 2.0):
        raise ValueError(f"need eps in [1, 2], got {eps}")
    lam = (eps - 0.5) / (eps - 1.0 + n / 2.0)
    if eps == 2.0:
        if not r >= 2.0:
            raise ValueError(f"eps = 2 branch needs r >= 2, got r={r}")
        return IndexSelection(n=n, eps=eps, r=r, r_tilde=1.0, lam=lam)

    r_sup = n / (2.0 - eps)
    if not (2.0 <= r < r_sup):
        raise ValueError(f"need r in [2, n/(2-eps)) = [2, {r_sup}), got r={r}")
    if not (0.0 < r1_position < 1.0):
        raise ValueError("r1_position must lie strictly in (0, 1)")

    lo, hi = admissible_interval(n, eps, r)
    if not lo < hi:  # cannot occur for admissible (n, eps, r); guarded anyway
        raise ValueError(f"empty admissible interval for (n={n}, eps={eps}, r={r}): ({lo}, {hi})")
    target = lo + r1_position * (hi - lo)  # 2n/r1
    r1 = 2.0 * n / target

    s_band = -1.0 + n / r + eps - 1.0  # s_r + eps - 1
    inv_r2 = (n / r1 - s_band) / n  # from -n/r2 = s_band - n/r1
    r2 = 1.0 / inv_r2
    r3 = r1 * r2 / (r1 + r2)
    r3_conj = r3 / (r3 - 1.0)
    r4 = r3_conj * (r - 1.0)
    r5 = r * n / (n - 2.0)
    mu = (r * n / 2.0) * (1.0 / r4 - (n - 2.0) / (r * n))
    nu = (r * n / 2.0) * (1.0 / r1 - (n - 2.0) / (r * n))

    sel = IndexSelection(
        n=n, eps=eps, r=r, r_tilde=r, r1=r1, r2=r2, r3=r3, r4=r4, r5=r5, mu=mu, nu=nu, lam=lam
    )
    _validate_selection(sel, lo, hi)
    return sel


def _validate_selection(sel: IndexSelection, lo: float, hi: float) -> None:
    n, r = sel.n, sel.r
    checks = [
        (lo < 2.0 * n / sel.r1 < hi, "2n/r1 outside the admissible interval"),
        (
            r * n / (n + 2.0 * (r - 1.0)) < sel.r3 < r < sel.r1 < r * n / (n - 2.0),
            "ordering chain violated",
        ),
        (0.0 < sel.mu < 1.0, "mu outside (0, 1)"),
        (0.0 < sel.nu < 1.0, "nu outside (0, 1)"),
        (0.0 < sel.lam < 1.0, "lambda outside (0, 1)"),
        (sel.r2 > 0 and sel.r4 > 0, "negative auxiliary exponent"),
    ]
    for ok, msg in checks:
        if not ok:
            raise AssertionError(f"index selection invariant failed: {msg} ({sel})")
    residual = exponent_identity_check(sel)
    if residual > 1e-12:
        raise AssertionError(f"exponent identity residual {residual} exceeds 1e-12 ({sel})")


def exponent_identity_check(sel: IndexSelection) -> float:
    """|(r-1) mu + 2 nu - (1 + r eps/2)|; must be <= 1e-12 for any r1 in I."""
    if sel.mu is None or sel.nu is None:
        return 0.0
    return abs((sel.r - 1.0) * sel.mu + 2.0 * sel.nu - (1.0 + sel.r * sel.eps / 2.0))


def pairing_exponents(eps: float, r: float) -> tuple[float, float]:
    """The unique scaling-consistent pairing-bound exponents (alpha, beta).

    alpha = 1 + r eps/2 weights the rough band norm, beta = r(2-eps)/2 the
    smooth one; alpha + beta = r + 1 always.
    """
    return 1.0 + r * eps / 2.0, r * (2.0 - eps) / 2.0


@dataclass(frozen=True)
class NuInterpolation:
    """Branch bookkeeping for the Lebesgue-side interpolation step.

    ``branch`` records which comparison applies (r2 >= r5 or r2 < r5);
    rho/sigma are only set on the second branch. The norms themselves are
    always evaluated directly; this routine is pure index arithmetic.
    """

    branch: str
    nu: float
    rho: Optional[float] = None
    sigma: Optional[float] = None


def nu_interpolation_exponents(sel: IndexSelection) -> NuInterpolation:
    if sel.r1 is None:
        raise ValueError("nu interpolation applies to the eps < 2 branch only")
    n, r, eps = sel.n, sel.r, sel.eps
    if sel.r2 >= sel.r5:
        return NuInterpolation(branch="r2>=r5", nu=sel.nu)
    # geometric interpolation hits regularity 0 between s_{r2}+eps-1 and
    # s_r+eps-1 (weight rho), then Hoelder in p between r and r5 (weight
    # sigma) matches the middle Lebesgue exponent r2
    s_r2_band = -1.0 + n / sel.r2 + eps - 1.0
    s_r_band = -1.0 + n / r + eps - 1.0
    rho = -s_r_band / (s_r2_band - s_r_band)
    sigma = (1.0 / sel.r2 - 1.0 / sel.r5) / (1.0 / r - 1.0 / sel.r5)
    if not (0.0 < rho < 1.0 and 0.0 < sigma < 1.0):
        raise AssertionError(f"branch exponents outside (0,1): rho={rho}, sigma={sigma}")
    return NuInterpolation(branch="r2<r5", nu=sel.nu, rho=rho, sigma=sigma)


# ---------------------------------------------------------------------------
# per-band energy budget


@dataclass
class EnergyBudgetEntry:
    """Weighted band sums of the vorticity energy identity at one time pair.

    For eps < 2: time derivative of ||D_J omega||_r^r, the dissipation
    surrogate ||D_J omega||^r at exponent r n/(n-2), and the pairing
    <Omega_J, |D_J omega|^{r-2} D_J omega>, all summed with weights
    2^{J r (s_r + eps - 1)}. For eps = 2 the l^1 ladder is used: the time
    derivative of the (r, 1) band norm against the weighted l^1 sum of
    ||Omega_J||_r. Ratios are empirical constants, recorded not asserted.
    """

    t_mid: float
    lhs_time_derivative: float
    dissipation: float
    pairing: float
    budget_ratio: Optional[float]
    rhs_bound_ratio: Optional[float]
    bands_used: int


def _band_tensor_norms(
    bank: DyadicFilterBank, omega: SpectralField, p: float
) -> dict[int, float]:
    mags = band_magnitudes(bank, omega)
    vol = bank.grid.cell_volume
    out = {}
    for j, mag in mags.items():
        if math.isinf(p):
            out[j] = float(np.max(mag))
        else:
            out[j] = float((np.sum(mag**p) * vol) ** (1.0 / p))
    return out


def energy_budget(
    bank: DyadicFilterBank,
    first: SolverState,
    second: SolverState,
    r: float,
    eps: float,
) -> EnergyBudgetEntry:
    """Evaluate the per-band energy budget across two consecutive states."""
    if not second.t > first.t:
        raise ValueError("states must be consecutive in time")
    if first.u.grid != second.u.grid:
        raise ValueError("grid mismatch between states")
    if not r >= 2:
        raise ValueError(f"budget requires r >= 2, got {r}")
    grid = first.u.grid
    n = grid.n
    dt = second.t - first.t
    t_mid = 0.5 * (first.t + second.t)
    s_band = -1.0 + n / r + eps - 1.0

    omega0 = vorticity_from_velocity(first.u)
    omega1 = vorticity_from_velocity(second.u)
    u_mid = SpectralField(grid, 0.5 * (first.u.coeffs + second.u.coeffs))
    omega_mid = SpectralField(grid, 0.5 * (omega0.coeffs + omega1.coeffs))

    # Omega_J = [u.grad, D_J] omega - 2 D_J (omega . grad u); the advection
    # part of the commutator is band-independent and hoisted out
    advected = advective_derivative(u_mid, omega_mid)
    stretch = _stretching_tensor(u_mid, omega_mid)

    norms0 = _band_tensor_norms(bank, omega0, r)
    norms1 = _band_tensor_norms(bank, omega1, r)
    mid_mags = band_magnitudes(bank, omega_mid)
    vol = grid.cell_volume

    if eps == 2.0:
        lhs_sum = 0.0
        rhs_sum = 0.0
        used = 0
        for j in bank.band_range:
            if norms0[j] < 1e-14 and norms1[j] < 1e-14:
                continue
            used += 1
            weight = 2.0 ** (j * (s_band + 1.0))  # s_r + 1
            lhs_sum += weight * (norms1[j] - norms0[j]) / dt
            omega_band = bank.delta_proj(j, omega_mid)
            comm = advective_derivative(u_mid, omega_band) - bank.delta_proj(j, advected)
            omega_j = comm - 2.0 * bank.delta_proj(j, stretch)
            rhs_sum += weight * lp_norm(omega_j, r)
        ratio = lhs_sum / rhs_sum if rhs_sum > 1e-300 else None
        norm_ladder = besov_norm(bank, omega_mid, BesovParams(s_band + 1.0, r, 1.0))
        rhs_bound = rhs_sum / norm_ladder**2 if norm_ladder > 0 else None
        return EnergyBudgetEntry(t_mid, lhs_sum, 0.0, rhs_sum, ratio, rhs_bound, used)

    r5 = r * n / (n - 2.0)
    ddt_sum = 0.0
    diss_sum = 0.0
    pair_sum = 0.0
    used = 0
    for j in bank.band_range:
        if norms0[j] < 1e-14 and norms1[j] < 1e-14:
            continue
        used += 1
        weight = 2.0 ** (j * r * s_band)
        ddt_sum += weight * (norms1[j] ** r - norms0[j] ** r) / dt
        mag = mid_mags[j]
        diss_sum += weight * float(np.sum(mag**r5) * vol) ** (r / r5)
        omega_band = bank.delta_proj(j, omega_mid)
        comm = advective_derivative(u_mid, omega_band) - bank.delta_proj(j, advected)
        omega_j = comm - 2.0 * bank.delta_proj(j, stretch)
        test_tensor = inverse_transform(omega_band) * np.where(mag > 0, mag, 1.0) ** (r - 2.0)
        pair_sum += weight * float(np.sum(inverse_transform(omega_j) * test_tensor) * vol)

    ratio = (ddt_sum + diss_sum) / pair_sum if abs(pair_sum) > 1e-300 else None
    alpha, beta = pairing_exponents(eps, r)
    rough = besov_norm(bank, omega_mid, BesovParams(s_band, r, r))
    smooth = besov_norm(bank, omega_mid, BesovParams(s_band, r5, r))
    denom = rough**alpha * smooth**beta
    rhs_bound = pair_sum / denom if denom > 0 else None
    return EnergyBudgetEntry(t_mid, ddt_sum, diss_sum, pair_sum, ratio, rhs_bound, used)


# ---------------------------------------------------------------------------
# synthetic self-similar families


@dataclass
class DiagnosticRecord:
    """One time sample of a diagnostic series."""

    t: float
    norms: dict[tuple[float, float, float], float] = dataclass_field(default_factory=dict)
    budget: Optional[EnergyBudgetEntry] = None
    fitted_exponent: Optional[float] = None
    skip_reason: Optional[str] = None


def dilated_samples(field: SpectralField, lam: float) -> np.ndarray:
    """Physical samples of x -> f(lam * x) on the field's own grid.

    Evaluates the trigonometric interpolant of f at the scaled points by
    dense per-axis Fourier summation (exact up to rounding; wrap-around is
    automatic by periodicity). Frequencies stretched beyond the Nyquist
    ball alias when the result is re-sampled; callers must check
    :func:`effective_max_wavenumber` against the grid.
    """
    grid = field.grid
    x = np.arange(grid.N) * (grid.L / grid.N)
    k = grid.axis_wavenumbers()
    matrix = np.exp(1j * lam * np.outer(x, k))
    arr = field.coeffs
    comp_ndim = arr.ndim - grid.n
    for d in range(grid.n):
        arr = np.moveaxis(np.tensordot(matrix, arr, axes=(1, comp_ndim + d)), 0, comp_ndim + d)
    return np.real(arr) / grid.volume


def effective_max_wavenumber(field: SpectralField, rel_floor: float = 1e-13) -> float:
    """Largest |k| carrying a coefficient above rel_floor * max|coeff|."""
    mag = np.abs(field.coeffs)
    if field.rank:
        mag = np.max(mag, axis=tuple(range(field.rank)))
    peak = float(np.max(mag))
    if peak == 0.0:
        return 0.0
    active = mag > rel_floor * peak
    return float(np.max(field.grid.k_magnitude()[active]))


def synthetic_family_states(
    profile: SpectralField, T: float, sample_times: Sequence[float]
):
    """Yield (t, snapshot, skip_reason) for u(t) = (T-t)^{-1/2} U(x/sqrt(T-t)).

    ``snapshot`` is None (with a reason) when the sample time is at or past
    T, or when the rescaled spectrum escapes the resolved ball.
    """
    grid = profile.grid
    k_profile = effective_max_wavenumber(profile)
    k_safe = grid.k_fundamental * (grid.N // 2 - 1)
    for t in sample_times:
        remaining = T - t
        if not remaining > 0:
            yield t, None, "sample time at or past T"
            continue
        lam = 1.0 / math.sqrt(remaining)
        if lam * k_profile > k_safe:
            yield t, None, (
                f"rescaled spectrum escapes resolved bands "
                f"(lam*k={lam * k_profile:.1f} > {k_safe:.1f})"
            )
            continue
        samples = lam * dilated_samples(profile, lam)
        snapshot = forward_transform(grid, samples)
        snapshot.coeffs[(...,) + (0,) * grid.n] = 0.0  # drop wrap-tail mean
        yield t, snapshot, None


def synthetic_blowup_family(
    bank: DyadicFilterBank,
    profile: SpectralField,
    T: float,
    norm_params: Sequence[BesovParams],
    sample_times: Sequence[float],
) -> list[DiagnosticRecord]:
    """Evaluate norms of u(t) = (T-t)^{-1/2} U(x / sqrt(T-t)) on the grid.

    ``profile`` must be zero-mean and spatially localized (its wrap-around
    tails enter the rescaled samples). Samples whose rescaled spectrum
    escapes the resolved ball are skipped with a reason.
    """
    records = []
    for t, snapshot, skip in synthetic_family_states(profile, T, sample_times):
        if snapshot is None:
            records.append(DiagnosticRecord(t=t, skip_reason=skip))
            continue
        mags = band_magnitudes(bank, snapshot)
        record = DiagnosticRecord(t=t)
        for params in norm_params:
            value = besov_norm(bank, snapshot, params, magnitudes=mags)
            record.norms[(params.s, params.p, params.q)] = value
        records.append(record)
    return records


# ---------------------------------------------------------------------------
# rate fitting and the ODE lemma


@dataclass
class RateFit:
    """Least-squares fit of log(norm) against log(T - t)."""

    slope: float
    intercept: float
    stderr: float
    residual: float
    samples: int


def fit_rate(times: Sequence[float], norms: Sequence[float], T: float) -> RateFit:
    """Fit log(norm) = slope * log(T - t) + intercept.

    A family growing like (T-t)^{-eps/2} fits slope -eps/2. Requires at
    least five strictly increasing samples before T with positive norms.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    if t.size < 5:
        raise ValueError(f"rate fit needs >= 5 samples, got {t.size}")
    if not np.all(np.diff(t) > 0):
        raise ValueError("sample times must be strictly increasing")
    if not np.all(t < T):
        raise ValueError("all sample times must precede T")
    if not np.all(y > 0):
        raise ValueError("norms must be positive for a log-log fit")
    x = np.log(T - t)
    ylog = np.log(y)
    design = np.stack([x, np.ones_like(x)], axis=1)
    coef, res, _, _ = np.linalg.lstsq(design, ylog, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    fitted = design @ coef
    residual = float(np.sqrt(np.sum((ylog - fitted) ** 2)))
    dof = max(t.size - 2, 1)
    x_spread = float(np.sum((x - np.mean(x)) ** 2))
    stderr = math.sqrt(residual**2 / dof / x_spread) if x_spread > 0 else math.inf
    return RateFit(slope, intercept, stderr, residual, int(t.size))


def ode_lower_bound(gamma: float, c: float, T: float, t: float) -> float:
    """(gamma c (T - t))^{-1/gamma}: the forced lower bound at time t < T."""
    if not (gamma > 0 and c > 0):
        raise ValueError("gamma and c must be positive")
    if not t < T:
        raise ValueError("bound is defined for t < T only")
    return (gamma * c * (T - t)) ** (-1.0 / gamma)


@dataclass
class OdeCheck:
    """Verdict for a sampled trajectory against the ODE lower bound.

    status is one of:
        pass                 inequality holds and bound respected
        fail                 inequality holds, bound violated beyond slack
        precondition-unmet   trajectory cannot diverge by T
        inequality-violated  dX/dt <= c X^{1+gamma} fails discretely
    worst_margin is the most negative slack-adjusted bound margin
    (positive margin = above the bound) in the linearizing variable.
    """

    status: str
    worst_margin: float
    detail: str = ""


def verify_ode_lemma(
    times: Sequence[float],
    values: Sequence[float],
    gamma: float,
    c: float,
    T: float,
    safety: float = 4.0,
) -> OdeCheck:
    """Check a sampled super-solution against the blow-up lower bound.

    Works in the linearizing variable Y = X^{-gamma}, where the bound is
    the line Y <= gamma c (T - t); the allowed slack scales with the
    sampling step (forward-Euler trajectories undershoot the bound by
    O(dt log) in Y).
    """
    t = np.asarray(times, dtype=float)
    x = np.asarray(values, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two samples")
    if not np.all(np.diff(t) > 0):
        raise ValueError("sample times must be strictly increasing")
    if not np.all(x > 0):
        raise ValueError("trajectory values must be positive")
    if not np.all(t < T):
        raise ValueError("samples must precede T")

    # discrete differential inequality (right-endpoint comparison is valid
    # for convex growth)
    diffs = np.diff(x) / np.diff(t)
    caps = c * np.maximum(x[:-1], x[1:]) ** (1.0 + gamma)
    if np.any(diffs > caps * (1.0 + 1e-9) + 1e-300):
        worst = float(np.max(diffs - caps))
        return OdeCheck("inequality-violated", worst, "dX/dt exceeds c X^{1+gamma}")

    # divergence feasibility: even the extremal solution from the last
    # sample blows up no earlier than t_f + 1/(gamma c X_f^gamma)
    t_blow_min = t[-1] + 1.0 / (gamma * c * x[-1] ** gamma)
    if t_blow_min > T * (1.0 + 1e-12) + 1e-12:
        return OdeCheck(
            "precondition-unmet",
            float(t_blow_min - T),
            f"cannot diverge before t={t_blow_min:.6g} > T={T:.6g}",
        )

    y = x ** (-gamma)
    bound_y = gamma * c * (T - t)
    dt_max = float(np.max(np.diff(t)))
    span = np.log((T - t[0]) / (T - t))
    slack = safety * ((gamma + 1.0) * c / 2.0) * dt_max * (span + 1.0)
    margins = bound_y + slack - y  # >= 0 when X respects the slackened bound
    worst = float(np.min(margins))
    status = "pass" if worst >= 0.0 else "fail"
    return OdeCheck(status, worst)


# ---------------------------------------------------------------------------
# qualitative blow-up monitor


@dataclass
class QualitativeRow:
    """Per-sample norms and interpolation slacks for the blow-up monitor.

    interp_slack_rel is the relative slack of the constant-1 three-norm
    interpolation at regularity -1/2 (must be >= -1e-10); sup_norm_slack
    checks ||u||_inf <= l^1 band sum; alt_route_ratio records the
    implied-constant comparison used by the alternative hypothesis route.
    """

    t: float
    norm_minus_half: float
    norm_minus_n_half: float
    norm_eps_excess: float
    sup_norm: float
    interp_slack_rel: float
    sup_norm_slack: float
    alt_route_ratio: Optional[float]


def qualitative_blowup_monitor(
    bank: DyadicFilterBank,
    series: Sequence[tuple[float, SpectralField]],
    eps: float,
) -> list[QualitativeRow]:
    """Report the norms entering the qualitative divergence argument.

    Divergence itself is unverifiable numerically; the monitor reports the
    quantities and checks only the constant-1 inequalities.
    """
    n = bank.grid.n
    lam = (eps - 0.5) / (eps - 1.0 + n / 2.0)
    lam_alt = (eps - 1.0) / (eps - 1.0 + n / 2.0)
    rows = []
    for t, u in series:
        mags = band_magnitudes(bank, u)
        js = np.array(sorted(mags))
        sup_profile = np.array([float(np.max(mags[j])) for j in js])
        sup_norm = lp_norm(u, math.inf)

        def weighted(s: float, q: float) -> float:
            return lq_norm(2.0 ** (js * s) * sup_profile, q)

        n_half = weighted(-0.5, math.inf)
        n_nhalf = weighted(-n / 2.0, math.inf)
        n_eps = weighted(-1.0 + eps, math.inf)
        rhs = n_nhalf**lam * n_eps ** (1.0 - lam)
        slack_rel = (rhs - n_half) / rhs if rhs > 0 else 0.0

        band_l1 = weighted(0.0, 1.0)
        sup_slack = (band_l1 - sup_norm) / band_l1 if band_l1 > 0 else 0.0
        alt_rhs = n_nhalf**lam_alt * n_eps ** (1.0 - lam_alt)
        alt_ratio = band_l1 / alt_rhs if alt_rhs > 0 else None
        rows.append(
            QualitativeRow(
                t=t,
                norm_minus_half=n_half,
                norm_minus_n_half=n_nhalf,
                norm_eps_excess=n_eps,
                sup_norm=sup_norm,
                interp_slack_rel=slack_rel,
                sup_norm_slack=sup_slack,
                alt_route_ratio=alt_ratio,
            )
        )
    return rows
