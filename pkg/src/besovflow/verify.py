"""The identity/inequality verification suite behind the `verify` command.

Three grades of checks:

  exact      identities that hold to rounding on dealias-safe fields
             (partition of unity, band orthogonality, reconstruction,
             the Bony and commutator decompositions); failures fail the run
  constant1  inequalities with constant exactly 1 (Lebesgue lower bound,
             Hoelder interpolation); failures fail the run
  recorded   implied-constant bounds (Bernstein, embeddings, paraproduct /
             remainder / commutator estimates, kernel bound); their
             empirical ratios are written to CSV and never fail the run
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fields as field_gen
from .besov import (
    BesovParams,
    besov_norm,
    sobolev_envelope,
    sobolev_norm,
    verify_convergence_bound,
    verify_embedding,
    verify_interpolation_geometric,
    verify_interpolation_holder,
    verify_lebesgue_comparison,
)
from .bony import bony_decomposition, monitor_paraproduct_estimates, monitor_remainder_estimates, paraproduct
from .commutator import (
    decompose_commutator,
    monitor_commutator_estimates,
    verify_commutator_kernel_bound,
)
from .config import ExperimentConfig
from .cutoffs import BAND_INNER, BAND_OUTER, DyadicFilterBank, build_cutoffs, verify_bernstein
from .reporting import write_csv
from .rng import stream
from .spectral import GridSpec, SpectralField, lp_norm
from .snapshots import read_snapshot  # noqa: F401  (re-exported for the CLI)

__all__ = ["VerifyOutcome", "run_verify"]

EXACT_TOL = 1e-12
PARTITION_TOL = 1e-14
ORTHOGONALITY_TOL = 1e-14
SUPPORT_TOL = 1e-13
CONSTANT1_TOL = 1e-10


@dataclass
class VerifyOutcome:
    failures: list[str] = field(default_factory=list)
    csv_files: list[Path] = field(default_factory=list)
    recorded_max: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures


def _record(outcome: VerifyOutcome, key: str, value) -> None:
    if value is None or not np.isfinite(value):
        return
    current = outcome.recorded_max.get(key, 0.0)
    outcome.recorded_max[key] = max(current, float(value))


def run_verify(config: ExperimentConfig, out_dir: Path, seed: int) -> VerifyOutcome:
    grid = GridSpec(config.grid.n, config.grid.N, config.grid.L)
    bank = DyadicFilterBank(grid, build_cutoffs(config.cutoff.smoothing))
    out = VerifyOutcome()
    outdir = Path(out_dir)
    count = config.corpus.count
    slope = config.corpus.slope

    def new_field(i: int, label: str, **kw):
        return field_gen.random_field(grid, stream(seed, "verify", f"{label}-{i}"), slope=slope, **kw)

    # --- partition of unity and quadratic bounds (grid-level, exact) -----
    defect = bank.partition_defect()
    sq_lo, sq_hi = bank.squared_partition_bounds()
    out.csv_files.append(
        write_csv(
            outdir / "partition.csv",
            ["check_id", "value", "bound", "passed"],
            [
                ("partition-defect", defect, PARTITION_TOL, defect <= PARTITION_TOL),
                ("phi-squared-min", sq_lo, 0.5, sq_lo >= 0.5 - PARTITION_TOL),
                ("phi-squared-max", sq_hi, 1.0, sq_hi <= 1.0 + PARTITION_TOL),
            ],
        )
    )
    if defect > PARTITION_TOL:
        out.failures.append(f"partition of unity defect {defect}")
    if sq_lo < 0.5 - PARTITION_TOL or sq_hi > 1.0 + PARTITION_TOL:
        out.failures.append(f"squared partition bounds [{sq_lo}, {sq_hi}] escape [1/2, 1]")

    # --- exact identities on the random corpus ---------------------------
    rows = []
    js = list(bank.band_range)
    for i in range(count):
        u = new_field(i, "identity-u")
        v = new_field(i, "identity-v")
        vec = new_field(i, "identity-vec", rank=1, divergence_free=True)

        recon = bank.reconstruct(u)
        recon_defect = lp_norm(recon - u, 2) / lp_norm(u, 2)

        ortho = 0.0
        for a_idx in range(len(js)):
            for b_idx in range(a_idx + 2, len(js)):
                prod = bank.phi_multiplier(js[a_idx]) * bank.phi_multiplier(js[b_idx])
                ortho = max(ortho, float(np.max(np.abs(prod))))

        support = 0.0
        for j_hi in js:
            if j_hi - 5 < js[0]:
                continue
            piece = paraproduct_band_term(bank, u, v, j_hi)
            norm_piece = lp_norm(piece, 2)
            if norm_piece == 0.0:
                continue
            for j_lo in range(js[0], j_hi - 4):
                masked = SpectralField(grid, piece.coeffs * bank.phi_multiplier(j_lo))
                support = max(support, lp_norm(masked, 2) / norm_piece)

        bony = bony_decomposition(bank, u, v)
        bony_defect = bony.identity_defect()

        j_mid = js[len(js) // 2]
        pieces = decompose_commutator(bank, j_mid, vec, u)
        comm_defect = pieces.identity_defect()
        r6_norm = pieces.divergence_piece_norm()

        rows.append((i, recon_defect, ortho, support, bony_defect, comm_defect, r6_norm))
        for name, value, tol in (
            ("reconstruction", recon_defect, EXACT_TOL),
            ("band-orthogonality", ortho, ORTHOGONALITY_TOL),
            ("paraproduct-support", support, SUPPORT_TOL),
            ("bony-identity", bony_defect, EXACT_TOL),
            ("commutator-identity", comm_defect, EXACT_TOL),
            ("commutator-R6", r6_norm, EXACT_TOL),
        ):
            if value > tol:
                out.failures.append(f"{name} defect {value} > {tol} on field {i}")
    out.csv_files.append(
        write_csv(
            outdir / "identities.csv",
            ["field", "reconstruction", "orthogonality", "paraproduct_support", "bony", "commutator", "r6"],
            rows,
        )
    )

    # --- Lebesgue comparison and interpolation (constant-1 + recorded) ---
    leb_rows, holder_rows, geom_rows, embed_rows = [], [], [], []
    for i in range(count):
        u = new_field(i, "ineq")
        for p in (1.0, 2.0, math.inf):
            result = verify_lebesgue_comparison(bank, u, p)
            if result is None:
                continue
            rough, smooth = result
            leb_rows.append(("lebesgue", f"p={p}", i, rough, smooth))
            _record(out, f"rough-lp-p={p}", rough)
            if smooth > 1.0 + CONSTANT1_TOL:
                out.failures.append(f"smooth Lebesgue bound violated: ratio {smooth} (field {i}, p={p})")
        check = verify_interpolation_holder(
            bank, u, BesovParams(0.0, 2.0, 2.0), BesovParams(1.0, 2.0, 2.0), 0.5
        )
        holder_rows.append(("holder", "(0,2,2)x(1,2,2)@0.5", i, check.lhs, check.rhs))
        if check.relative_slack < -CONSTANT1_TOL:
            out.failures.append(f"Hoelder interpolation slack {check.relative_slack} (field {i})")
        ratio = verify_interpolation_geometric(bank, u, 2.0, -0.5, 1.0, 0.5)
        geom_rows.append(("geometric", "p=2,s=(-0.5,1),lam=0.5", i, ratio, None))
        _record(out, "interpolation-geometric", ratio)
        for p1, p2, q1, q2 in ((1.0, 2.0, 1.0, 2.0), (2.0, math.inf, 2.0, math.inf)):
            ratio = verify_embedding(bank, u, p1, p2, q1, q2, delta=0.5)
            embed_rows.append(("embedding", f"p=({p1},{p2}),q=({q1},{q2}),d=0.5", i, ratio, None))
            _record(out, f"embedding-p={p1}->{p2}", ratio)
    header = ["check_id", "params", "field", "lhs_or_ratio", "rhs_or_aux"]
    out.csv_files.append(write_csv(outdir / "lebesgue.csv", header, leb_rows))
    out.csv_files.append(write_csv(outdir / "interpolation_holder.csv", header, holder_rows))
    out.csv_files.append(write_csv(outdir / "interpolation_geometric.csv", header, geom_rows))
    out.csv_files.append(write_csv(outdir / "embedding.csv", header, embed_rows))

    # --- Sobolev equivalence envelope (derived oracle, exact) ------------
    sob_rows = []
    for s in (-1.0, 0.0, 1.0, 2.0):
        lo, hi = sobolev_envelope(bank, s)
        for i in range(min(count, 25)):
            u = new_field(i, f"sobolev-{s}")
            ratio = besov_norm(bank, u, BesovParams(s, 2.0, 2.0)) / sobolev_norm(u, s)
            sob_rows.append((f"s={s}", i, ratio, lo, hi))
            if not (lo * (1 - 1e-10) <= ratio <= hi * (1 + 1e-10)):
                out.failures.append(f"Sobolev ratio {ratio} outside envelope [{lo}, {hi}] at s={s}")
    out.csv_files.append(
        write_csv(outdir / "sobolev.csv", ["params", "field", "ratio", "env_lo", "env_hi"], sob_rows)
    )

    # --- convergence bound (recorded) ------------------------------------
    conv_rows = []
    for i in range(min(count, 20)):
        u = new_field(i, "conv")
        pieces = [(j, bank.delta_proj(j, u)) for j in bank.band_range]
        ratio = verify_convergence_bound(bank, pieces, (BAND_INNER, BAND_OUTER), 0.5, 2.0, 2.0)
        conv_rows.append(("convergence", "s=0.5,p=q=2", i, ratio, None))
        _record(out, "convergence-bound", ratio)
    out.csv_files.append(write_csv(outdir / "convergence.csv", header, conv_rows))

    # --- Bernstein ratios (recorded) --------------------------------------
    bern_rows = []
    for i in range(min(count, 20)):
        u = new_field(i, "bernstein")
        for j in js[1:-1]:
            report = verify_bernstein(bank, j, u, p=2.0, q=2.0)
            bern_rows.append(
                (f"j={j}", "p=q=2", i, report.projection_ratio, report.multiplier_ratio)
            )
            _record(out, "bernstein-projection", report.projection_ratio)
            _record(out, "bernstein-multiplier", report.multiplier_ratio)
            if report.inverse_gradient_ratio is not None:
                _record(out, "bernstein-inverse-gradient", report.inverse_gradient_ratio)
    out.csv_files.append(write_csv(outdir / "bernstein.csv", header, bern_rows))

    # --- paraproduct / remainder / commutator estimate monitors ----------
    para_rows, rem_rows, comm_rows, kernel_rows = [], [], [], []
    monitor_count = max(2, min(count // 10, 6))
    for i in range(monitor_count):
        u = new_field(i, "monitor-u")
        v = new_field(i, "monitor-v")
        vec = new_field(i, "monitor-vec", rank=1, divergence_free=True)
        para = monitor_paraproduct_estimates(bank, u, v, -0.5, 1.0, 2.0, 4.0, 2.0, 2.0)
        para_rows.append(("bony-1", "s=(-0.5,1),p=(2,4)", i, para.lebesgue_form, para.negative_index_form))
        _record(out, "paraproduct-lebesgue", para.lebesgue_form)
        _record(out, "paraproduct-negative", para.negative_index_form)
        rem = monitor_remainder_estimates(bank, u, v, 0.5, 0.5, 4.0, 4.0, 2.0, 2.0)
        rem_rows.append(("bony-3/4", "s=(0.5,0.5),p=(4,4)", i, rem.positive_sum_form, rem.endpoint_form))
        _record(out, "remainder-positive", rem.positive_sum_form)
        _record(out, "remainder-endpoint", rem.endpoint_form)
        ratios = monitor_commutator_estimates(bank, vec, u, -0.5, 1.0, 2.0, 4.0, 2.0, 2.0)
        for key, value in ratios.as_dict().items():
            comm_rows.append((key, "s=(-0.5,1),p=(2,4),q=(2,2)", i, value, None))
            _record(out, f"commutator-{key}", value)
        a = new_field(i, "kernel-a")
        b = new_field(i, "kernel-b")
        for j in js[1:-1]:
            ratio = verify_commutator_kernel_bound(bank, a, b, j, 2.0, 2.0)
            kernel_rows.append((f"kernel-j={j}", "p=q=2", i, ratio, None))
            _record(out, "kernel-bound", ratio)
    out.csv_files.append(write_csv(outdir / "paraproduct.csv", header, para_rows))
    out.csv_files.append(write_csv(outdir / "remainder.csv", header, rem_rows))
    out.csv_files.append(write_csv(outdir / "commutator.csv", header, comm_rows))
    out.csv_files.append(write_csv(outdir / "kernel_bound.csv", header, kernel_rows))

    # --- recorded maxima summary ------------------------------------------
    out.csv_files.append(
        write_csv(
            outdir / "recorded_max.csv",
            ["check_id", "max_ratio"],
            sorted(out.recorded_max.items()),
        )
    )
    return out


def paraproduct_band_term(bank, u, v, j_hi: int) -> SpectralField:
    """Single paraproduct summand S_{j_hi - 1} u * D_{j_hi} v (dealiased)."""
    from .bony import pointwise_product

    return pointwise_product(bank.s_proj(j_hi - 1, u), bank.delta_proj(j_hi, v))
