"""Experiment configuration: flat, line-oriented key=value with dotted keys.

Example::

    grid.n=3
    grid.N=64
    solver.dt=0.001
    diagnostics.eps=1,1.5

No nesting, no quoting; '#' starts a comment. Parsing then serializing
then parsing is the identity. Validation errors name the offending field
path (e.g. "grid.N").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Union

__all__ = [
    "ConfigError",
    "GridConfig",
    "CutoffConfig",
    "CorpusConfig",
    "SolverConfig",
    "DiagnosticsConfig",
    "OutputConfig",
    "ExperimentConfig",
    "parse_config",
    "serialize_config",
    "load_config",
]


class ConfigError(ValueError):
    """Invalid configuration; ``field_path`` names the offending key."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


@dataclass
class GridConfig:
    n: int = 3
    N: int = 32
    L: float = 2.0 * math.pi


@dataclass
class CutoffConfig:
    smoothing: float = 1.0


@dataclass
class CorpusConfig:
    count: int = 50
    slope: float = 1.0


@dataclass
class SolverConfig:
    dt: float = 1e-3
    t_end: float = 0.1
    init: str = "taylor-green"  # taylor-green | random-seeded | bsnap:<path>
    snapshot_every: int = 0  # snapshots every k steps; 0 = final only
    amplitude: float = 1.0


@dataclass
class DiagnosticsConfig:
    eps: list[float] = field(default_factory=lambda: [1.0, 1.5])
    p: list[float] = field(default_factory=lambda: [2.0])
    q: float = 2.0
    r: float = 2.0
    T: float = 1.0
    samples: int = 8


@dataclass
class OutputConfig:
    dir: str = "out"


@dataclass
class ExperimentConfig:
    seed: int = 12345
    grid: GridConfig = field(default_factory=GridConfig)
    cutoff: CutoffConfig = field(default_factory=CutoffConfig)
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


_SECTIONS = {
    "grid": GridConfig,
    "cutoff": CutoffConfig,
    "corpus": CorpusConfig,
    "solver": SolverConfig,
    "diagnostics": DiagnosticsConfig,
    "output": OutputConfig,
}


def _parse_value(path: str, raw: str, target_type) -> object:
    raw = raw.strip()
    try:
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        if target_type is str:
            return raw
        if target_type == list[float]:
            return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(path, f"cannot parse {raw!r} as {target_type}") from exc
    raise ConfigError(path, f"unsupported field type {target_type}")


def _format_value(value: object) -> str:
    if isinstance(value, list):
        return ",".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str) -> ExperimentConfig:
    """Parse key=value lines into a validated ExperimentConfig."""
    config = ExperimentConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}", f"expected key=value, got {stripped!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key == "seed":
            config.seed = int(_parse_value("seed", raw, int))
            continue
        if "." not in key:
            raise ConfigError(key, "expected a dotted key like grid.N")
        section_name, field_name = key.split(".", 1)
        section_cls = _SECTIONS.get(section_name)
        if section_cls is None:
            raise ConfigError(key, f"unknown section {section_name!r}")
        section = getattr(config, section_name)
        declared = {f.name: f.type for f in fields(section_cls)}
        # dataclass field types are strings under future annotations; map names
        type_map = {"int": int, "float": float, "str": str, "list[float]": list[float]}
        if field_name not in declared:
            raise ConfigError(key, f"unknown field {field_name!r} in section {section_name!r}")
        ftype = declared[field_name]
        if isinstance(ftype, str):
            ftype = type_map[ftype]
        setattr(section, field_name, _parse_value(key, raw, ftype))
    validate_config(config)
    return config


def serialize_config(config: ExperimentConfig) -> str:
    lines = [f"seed={config.seed}"]
    for section_name in _SECTIONS:
        section = getattr(config, section_name)
        for f in fields(section):
            lines.append(f"{section_name}.{f.name}={_format_value(getattr(section, f.name))}")
    return "\n".join(lines) + "\n"


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def validate_config(config: ExperimentConfig) -> None:
    """Check every referenced parameter range before any run starts."""
    g = config.grid
    if g.n not in (2, 3):
        raise ConfigError("grid.n", f"must be 2 or 3, got {g.n}")
    if g.N < 4 or (g.N & (g.N - 1)) != 0:
        raise ConfigError("grid.N", f"must be a power of two >= 4, got {g.N}")
    if not g.L > 0:
        raise ConfigError("grid.L", f"must be positive, got {g.L}")
    if not config.cutoff.smoothing > 0:
        raise ConfigError("cutoff.smoothing", "must be positive")
    if config.corpus.count < 1:
        raise ConfigError("corpus.count", "must be at least 1")
    s = config.solver
    if not s.dt > 0:
        raise ConfigError("solver.dt", "must be positive")
    if not s.t_end > 0:
        raise ConfigError("solver.t_end", "must be positive")
    if s.snapshot_every < 0:
        raise ConfigError("solver.snapshot_every", "must be >= 0")
    if not (s.init in ("taylor-green", "random-seeded") or s.init.startswith("bsnap:")):
        raise ConfigError("solver.init", f"unknown initializer {s.init!r}")
    d = config.diagnostics
    for eps in d.eps:
        if not (1.0 <= eps <= 2.0):
            raise ConfigError("diagnostics.eps", f"entries must lie in [1, 2], got {eps}")
    for p in d.p:
        if not p >= 1:
            raise ConfigError("diagnostics.p", f"entries must be >= 1, got {p}")
    if not d.q >= 1:
        raise ConfigError("diagnostics.q", f"must be >= 1, got {d.q}")
    if not d.r >= 2:
        raise ConfigError("diagnostics.r", f"must be >= 2, got {d.r}")
    if not d.T > 0:
        raise ConfigError("diagnostics.T", f"must be positive, got {d.T}")
    if d.samples < 5:
        raise ConfigError("diagnostics.samples", "rate fitting needs >= 5 samples")
