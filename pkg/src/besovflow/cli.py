"""Command-line harness: decompose, norm, verify, simulate, diagnose.

Global flags: --config <path> (flat key=value file), --out <dir>,
--seed <u64>. Exit codes: 0 success, 1 assertion failure, 2 config error,
3 runtime abort (instability).

All randomness flows from the single seed through named streams
(:mod:`besovflow.rng`), and CSV output is byte-deterministic for a fixed
(config, seed) pair.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import fields as field_gen
from .besov import BesovParams, band_magnitudes, besov_norm, recip, sobolev_norm
from .config import ConfigError, ExperimentConfig, load_config, serialize_config
from .cutoffs import DyadicFilterBank, build_cutoffs
from .diagnostics import (
    energy_budget,
    fit_rate,
    qualitative_blowup_monitor,
    synthetic_family_states,
)
from .reporting import write_csv
from .rng import stream
from .snapshots import read_snapshot, write_snapshot
from .solver import (
    InstabilityAbort,
    SolverState,
    enstrophy,
    kinetic_energy,
    resolution_fraction,
    states,
)
from .spectral import GridSpec, SpectralField, lp_norm
from .verify import run_verify

__all__ = ["main"]

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besovflow", description=__doc__)
    parser.add_argument("--config", type=Path, help="flat key=value config file")
    parser.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    parser.add_argument("--seed", type=int, help="root seed (overrides config seed)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("decompose", help="export cutoff profiles and per-band norms")
    sub.add_parser("norm", help="evaluate Besov/Sobolev norms of the configured field")
    sub.add_parser("verify", help="run the identity/inequality suite")

    sim = sub.add_parser("simulate", help="advance the solver and record snapshots")
    sim.add_argument("--n", type=int)
    sim.add_argument("--N", type=int)
    sim.add_argument("--L", type=float)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--t-end", dest="t_end", type=float)
    sim.add_argument("--init", type=str)
    sim.add_argument("--snapshot-every", dest="snapshot_every", type=int)
    sim.add_argument("--out-dir", dest="out_dir", type=Path)

    diag = sub.add_parser("diagnose", help="blow-up-rate diagnostics")
    diag.add_argument("--series", type=str, default="synthetic", help="'synthetic' or a bsnap directory")
    diag.add_argument("--eps", type=float, nargs="*")
    diag.add_argument("--p", type=float, nargs="*")
    diag.add_argument("--q", type=float)
    diag.add_argument("--r", type=float)
    diag.add_argument("--T", type=float)
    diag.add_argument("--emit", type=Path, help="diagnostics CSV path")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.output.dir = str(args.out)
    return config


def _initial_field(config: ExperimentConfig, grid: GridSpec) -> SpectralField:
    init = config.solver.init
    if init == "taylor-green":
        return field_gen.taylor_green(grid, config.solver.amplitude)
    if init == "random-seeded":
        u = field_gen.random_field(
            grid, stream(config.seed, "solver-init"), rank=1, divergence_free=True
        )
        return u * config.solver.amplitude
    if init.startswith("bsnap:"):
        field = read_snapshot(init[len("bsnap:"):])
        if field.grid != grid:
            raise ConfigError("solver.init", f"snapshot grid {field.grid} does not match {grid}")
        return field
    raise ConfigError("solver.init", f"unknown initializer {init!r}")


def _cmd_decompose(config: ExperimentConfig, out_dir: Path) -> int:
    grid = GridSpec(config.grid.n, config.grid.N, config.grid.L)
    bank = DyadicFilterBank(grid, build_cutoffs(config.cutoff.smoothing))
    out_dir.mkdir(parents=True, exist_ok=True)
    bank.profile.export_csv(out_dir / "cutoff_profile.csv")
    u = _initial_field(config, grid)
    rows = []
    for j in bank.band_range:
        band = bank.delta_proj(j, u)
        rows.append((j, lp_norm(band, 2), bank.fully_resolved(j)))
    write_csv(out_dir / "band_norms.csv", ["j", "l2_norm", "fully_resolved"], rows)
    print(f"band range: j in [{bank.band_range.j_min}, {bank.band_range.j_max}]")
    print(f"wrote {out_dir / 'cutoff_profile.csv'} and {out_dir / 'band_norms.csv'}")
    return EXIT_OK


def _cmd_norm(config: ExperimentConfig, out_dir: Path) -> int:
    grid = GridSpec(config.grid.n, config.grid.N, config.grid.L)
    bank = DyadicFilterBank(grid, build_cutoffs(config.cutoff.smoothing))
    u = _initial_field(config, grid)
    mags = band_magnitudes(bank, u)
    rows = []
    for eps in config.diagnostics.eps:
        for p in config.diagnostics.p:
            q = 1.0 if eps == 2.0 else config.diagnostics.q
            s = -1.0 + grid.n * recip(p) + eps
            value = besov_norm(bank, u, BesovParams(s, p, q), magnitudes=mags)
            rows.append((eps, p, q, s, value))
            print(f"besov eps={eps} p={p} q={q}: s={s:.4f} norm={value:.6e}")
    sob = sobolev_norm(u, 0.5)
    print(f"sobolev s=0.5 norm={sob:.6e}")
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / "norms.csv", ["eps", "p", "q", "s", "norm"], rows)
    return EXIT_OK


def _cmd_verify(config: ExperimentConfig, out_dir: Path) -> int:
    outcome = run_verify(config, out_dir, config.seed)
    for path in outcome.csv_files:
        print(f"wrote {path}")
    if outcome.failures:
        for failure in outcome.failures:
            print(f"FAIL {failure}", file=sys.stderr)
        return EXIT_ASSERTION
    print(f"verify: all exact and constant-1 checks passed ({len(outcome.csv_files)} reports)")
    return EXIT_OK


def _cmd_simulate(config: ExperimentConfig, out_dir: Path, args) -> int:
    if args.n is not None:
        config.grid.n = args.n
    if args.N is not None:
        config.grid.N = args.N
    if args.L is not None:
        config.grid.L = args.L
    if args.dt is not None:
        config.solver.dt = args.dt
    if args.t_end is not None:
        config.solver.t_end = args.t_end
    if args.init is not None:
        config.solver.init = args.init
    if args.snapshot_every is not None:
        config.solver.snapshot_every = args.snapshot_every
    if args.out_dir is not None:
        out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    grid = GridSpec(config.grid.n, config.grid.N, config.grid.L)
    u0 = _initial_field(config, grid)
    dt = config.solver.dt
    rows = []
    step_index = 0

    def record(state: SolverState) -> None:
        rows.append(
            (
                state.t,
                kinetic_energy(state.u),
                enstrophy(state.u),
                lp_norm(state.u, math.inf),
                resolution_fraction(state.u),
            )
        )

    last_state: Optional[SolverState] = None
    try:
        for state in states(SolverState(0.0, u0), dt, config.solver.t_end):
            record(state)
            every = config.solver.snapshot_every
            if every > 0 and step_index % every == 0:
                write_snapshot(out_dir / f"state_{state.t:.9f}.bsnap", state.u)
            last_state = state
            step_index += 1
    except InstabilityAbort as abort:
        path = out_dir / f"aborted_{abort.last_state.t:.9f}.bsnap"
        write_snapshot(path, abort.last_state.u)
        write_csv(out_dir / "timeseries.csv", _TIMESERIES_HEADER, rows)
        print(f"instability at t={abort.t_failed}; last finite state in {path}", file=sys.stderr)
        return EXIT_RUNTIME

    write_snapshot(out_dir / f"state_{last_state.t:.9f}.bsnap", last_state.u)
    write_csv(out_dir / "timeseries.csv", _TIMESERIES_HEADER, rows)
    print(f"simulated to t={last_state.t:.6f} in {step_index - 1} steps")
    if config.solver.init == "taylor-green":
        exact = field_gen.taylor_green(grid, config.solver.amplitude) * math.exp(-2.0 * last_state.t)
        error = lp_norm(last_state.u - exact, 2)
        print(f"taylor-green final L2 error vs closed form: {error:.3e}")
    return EXIT_OK


_TIMESERIES_HEADER = ["t", "energy", "enstrophy", "max_u", "resolution_fraction"]
_DIAG_HEADER = [
    "t",
    "eps",
    "p",
    "q",
    "norm",
    "fitted_slope_running",
    "budget_lhs",
    "budget_rhs",
    "ratio",
    "interp_slack",
]


def _diag_norm_params(grid_n: int, eps_list, p_list, q: float) -> list[tuple[float, float, float]]:
    triples = []
    for eps in eps_list:
        for p in p_list:
            qq = 1.0 if eps == 2.0 else q
            s = -1.0 + grid_n * recip(p) + eps
            triples.append((eps, p, qq, s))
    return triples


def _cmd_diagnose(config: ExperimentConfig, out_dir: Path, args) -> int:
    d = config.diagnostics
    eps_list = args.eps if args.eps else d.eps
    p_list = args.p if args.p else d.p
    q = args.q if args.q is not None else d.q
    r = args.r if args.r is not None else d.r
    T = args.T if args.T is not None else d.T
    out_dir.mkdir(parents=True, exist_ok=True)
    emit = args.emit if args.emit is not None else out_dir / "diagnostics.csv"

    grid = GridSpec(config.grid.n, config.grid.N, config.grid.L)
    bank = DyadicFilterBank(grid, build_cutoffs(config.cutoff.smoothing))
    rows = []
    summary: list[str] = []
    slack_violations = 0

    if args.series == "synthetic":
        profile = field_gen.wave_packet(grid)
        times = _synthetic_times(bank, profile, T, d.samples)
        triples = _diag_norm_params(grid.n, eps_list, p_list, q)
        history: dict[tuple[float, float, float], list[tuple[float, float]]] = {}
        for t, snapshot, skip in synthetic_family_states(profile, T, times):
            if snapshot is None:
                print(f"skip t={t}: {skip}", file=sys.stderr)
                continue
            mags = band_magnitudes(bank, snapshot)
            monitor = qualitative_blowup_monitor(bank, [(t, snapshot)], eps=max(eps_list))[0]
            if monitor.interp_slack_rel < -1e-10:
                slack_violations += 1
            for eps, p, qq, s in triples:
                value = besov_norm(bank, snapshot, BesovParams(s, p, qq), magnitudes=mags)
                series = history.setdefault((eps, p, qq), [])
                series.append((t, value))
                slope = None
                if len(series) >= 5:
                    slope = fit_rate([x for x, _ in series], [y for _, y in series], T).slope
                rows.append((t, eps, p, qq, value, slope, None, None, None, monitor.interp_slack_rel))
        for (eps, p, qq), series in sorted(history.items()):
            fit = fit_rate([x for x, _ in series], [y for _, y in series], T)
            target = -eps / 2.0
            verdict = "ok" if abs(fit.slope - target) <= 0.05 else "OFF-TARGET"
            summary.append(
                f"eps={eps} p={p} q={qq}: slope={fit.slope:.4f} target={target:.4f} [{verdict}]"
            )
    else:
        series_dir = Path(args.series)
        if not series_dir.is_dir():
            print(f"series directory {series_dir} does not exist", file=sys.stderr)
            return EXIT_CONFIG
        snaps = sorted(series_dir.glob("state_*.bsnap"))
        if not snaps:
            print(f"no state_*.bsnap snapshots in {series_dir}", file=sys.stderr)
            return EXIT_CONFIG
        loaded = []
        for path in snaps:
            t = float(path.stem.split("_", 1)[1])
            loaded.append(SolverState(t, read_snapshot(path)))
        eps0 = max(eps_list)
        monitor_rows = qualitative_blowup_monitor(bank, [(s.t, s.u) for s in loaded], eps=eps0)
        for row in monitor_rows:
            if row.interp_slack_rel < -1e-10:
                slack_violations += 1
        for first, second, monitor in zip(loaded, loaded[1:], monitor_rows):
            budget = energy_budget(bank, first, second, r=r, eps=eps0)
            rows.append(
                (
                    budget.t_mid,
                    eps0,
                    r,
                    1.0 if eps0 == 2.0 else r,
                    monitor.norm_eps_excess,
                    None,
                    budget.lhs_time_derivative + budget.dissipation,
                    budget.pairing,
                    budget.budget_ratio,
                    monitor.interp_slack_rel,
                )
            )
        summary.append(f"budget entries: {len(rows)} (r={r}, eps={eps0})")

    write_csv(emit, _DIAG_HEADER, rows)
    print(f"wrote {emit}")
    print("summary:")
    for line in summary:
        print(f"  {line}")
    if slack_violations:
        print(f"FAIL {slack_violations} interpolation slack violations", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def _synthetic_times(bank, profile, T: float, samples: int) -> list[float]:
    """Log-spaced sample times: T - t from 1.0 down to the escape margin."""
    from .diagnostics import effective_max_wavenumber

    grid = bank.grid
    k_profile = effective_max_wavenumber(profile)
    k_safe = grid.k_fundamental * (grid.N // 2 - 1)
    lam_max = max(1.5, 0.95 * k_safe / k_profile)
    remaining_min = 1.0 / lam_max**2
    remaining = np.exp(np.linspace(0.0, math.log(remaining_min), samples))
    return [T - rem for rem in remaining]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(config.output.dir)
    try:
        if args.command == "decompose":
            return _cmd_decompose(config, out_dir)
        if args.command == "norm":
            return _cmd_norm(config, out_dir)
        if args.command == "verify":
            return _cmd_verify(config, out_dir)
        if args.command == "simulate":
            return _cmd_simulate(config, out_dir, args)
        if args.command == "diagnose":
            return _cmd_diagnose(config, out_dir, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstabilityAbort as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    parser.error(f"unknown command {args.command!r}")
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
