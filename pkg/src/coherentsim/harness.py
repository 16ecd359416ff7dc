"""Experiment driver: noise sweeps, heatmaps, entropy tables, CSV output.

Every experiment is described by an `ExperimentConfig` and driven by a
master seed.  Each Monte Carlo instance draws its generator from
``SeedSequence(master_seed, spawn_key=(kind, grid index, sub index,
instance index))``, so results are reproducible bit-for-bit and independent
of scheduling or worker count.

Sweep grids are lists of Pauli rates p; the matched continuous width sigma
is derived per grid point through the entropy-matching pipeline, so both
noise families sit at equal readout uncertainty.  Records are sorted by
their identity columns and written as CSV with 17-significant-digit floats.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields, replace
from itertools import product

import numpy as np

from . import qec
from .circuits import (
    Circuit,
    GroverSpec,
    RandomCliffordSpec,
    build_grover,
    build_random_clifford,
    execute,
    inject_noise,
    optimal_iterations,
)
from .noise import ChannelMatch, NoiseSpec, match_channels
from .propagation import build_approx_circuit, propagate_variances
from .statevector import infidelity, marginal_probs

KINDS = ("qec_sweep", "grover_sweep", "clifford_heatmap", "entropy_table")
_KIND_IDS = {k: i for i, k in enumerate(KINDS)}

# Full-model infidelities below this are float noise around an exact zero;
# the ratio is undefined there and the sample is excluded.
_RATIO_FLOOR = 1e-14

DEFAULT_GRID_LO = 1e-6 / 3.0
DEFAULT_GRID_HI = 1e-1 / 3.0


class ConfigError(ValueError):
    """Raised for inconsistent experiment configurations."""


def log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    """n log-spaced values from lo to hi inclusive."""
    return tuple(float(v) for v in np.logspace(math.log10(lo), math.log10(hi), n))


def default_pauli_grid(n: int = 7) -> tuple[float, ...]:
    """Default sweep grid of Pauli rates, log-spaced over [1e-6/3, 1e-1/3]."""
    return log_grid(DEFAULT_GRID_LO, DEFAULT_GRID_HI, n)


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one experiment run."""

    kind: str
    noise_model: str = "both"  # continuous | pauli | both
    grid: tuple[float, ...] = ()
    n_instances: int = 1000
    n_shots: int = 100
    metric_mode: str = "overlap"  # overlap | shots
    # qec_sweep
    code: str = "513"
    m_list: tuple[int, ...] = (10, 50, 100)
    ec_list: tuple[int, ...] = (0, 1)
    # grover_sweep
    n_list: tuple[int, ...] = (3, 4, 5, 6, 7)
    marked: str = ""  # empty: all-ones string per N
    iterations: str = "paper"  # paper | optimal
    # clifford_heatmap
    n_qubits: int = 5
    h_grid: tuple[int, ...] = (10, 40, 70, 100)
    cnot_grid: tuple[int, ...] = (10, 40, 70, 100)
    circuits_per_cell: int = 100
    sigma: float = 0.05
    # seeding / output
    master_seed: int = 0
    out: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.noise_model not in ("continuous", "pauli", "both"):
            raise ConfigError(f"bad noise_model {self.noise_model!r}")
        if self.kind in ("qec_sweep", "grover_sweep", "entropy_table") and not self.grid:
            object.__setattr__(
                self, "grid", default_pauli_grid(50 if self.kind == "entropy_table" else 7)
            )
        if self.n_instances < 1 or self.n_shots < 1 or self.circuits_per_cell < 1:
            raise ConfigError("counts must be >= 1")
        if self.metric_mode not in ("overlap", "shots"):
            raise ConfigError(f"bad metric_mode {self.metric_mode!r}")
        if self.iterations not in ("paper", "optimal"):
            raise ConfigError(f"bad iterations mode {self.iterations!r}")
        if any(p < 0.0 or p >= 0.75 for p in self.grid):
            raise ConfigError("grid rates must lie in [0, 3/4) for entropy matching")

    @property
    def models(self) -> tuple[str, ...]:
        if self.noise_model == "both":
            return ("continuous", "pauli")
        return (self.noise_model,)


@dataclass(frozen=True)
class ResultRecord:
    """One aggregated data point; only the columns of its kind are written."""

    kind: str
    code: str = ""
    m: int = 0
    ec: int = 0
    model: str = ""
    N: int = 0
    n_h: int = 0
    n_cnot: int = 0
    p: float = 0.0
    p_bf: float = 0.0
    sigma: float = 0.0
    kappa: float = 0.0
    entropy: float = 0.0
    p_err: float = 0.0
    gsa_err: float = 0.0
    mean_ratio: float = 0.0
    var_ratio: float = 0.0
    stderr: float = 0.0
    n_instances: int = 0
    n_valid: int = 0
    n_undefined: int = 0


CSV_COLUMNS = {
    "qec_sweep": (
        "code", "m", "ec", "model", "p", "sigma", "kappa", "entropy",
        "p_err", "stderr", "n_instances",
    ),
    "grover_sweep": ("N", "model", "p", "sigma", "entropy", "gsa_err", "stderr"),
    "clifford_heatmap": (
        "n_h", "n_cnot", "sigma", "mean_ratio", "var_ratio", "n_valid", "n_undefined",
    ),
    "entropy_table": ("p", "p_bf", "kappa", "sigma", "entropy"),
}

_SORT_KEYS = {
    "qec_sweep": ("p", "code", "m", "ec", "model"),
    "grover_sweep": ("p", "N", "model"),
    "clifford_heatmap": ("n_h", "n_cnot"),
    "entropy_table": ("p",),
}


def instance_rng(
    master_seed: int, kind: str, grid_index: int, instance_index: int, sub_index: int = 0
) -> np.random.Generator:
    """Stable per-instance generator, independent of execution order."""
    ss = np.random.SeedSequence(
        entropy=master_seed,
        spawn_key=(_KIND_IDS[kind], grid_index, sub_index, instance_index),
    )
    return np.random.default_rng(ss)


def binomial_stderr(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


def _match_point(p: float) -> ChannelMatch:
    """Entropy-matched triple for a grid rate; p = 0 is the noiseless point."""
    if p == 0.0:
        return ChannelMatch(p=0.0, p_bf=0.0, kappa=math.inf, sigma=0.0, entropy=0.0)
    return match_channels(p)


def _noise_spec(model: str, match: ChannelMatch) -> NoiseSpec:
    if model == "continuous":
        return NoiseSpec.gaussian(match.sigma)
    return NoiseSpec.pauli(match.p)


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------


def run_qec_sweep(config: ExperimentConfig) -> list[ResultRecord]:
    """Logical error probability of code experiments over the matched noise grid."""
    records = []
    combos = list(product(config.m_list, config.ec_list, config.models))
    spec_cache = {
        (m, ec): qec.CodeExperimentSpec(
            config.code, m, ec, config.metric_mode, config.n_shots
        )
        for m, ec, _ in combos
    }
    circ_cache = {key: qec.build_code_circuit(spec) for key, spec in spec_cache.items()}
    for gi, p in enumerate(config.grid):
        match = _match_point(p)
        for si, (m, ec, model) in enumerate(combos):
            spec = spec_cache[(m, ec)]
            circ = circ_cache[(m, ec)]
            noise = _noise_spec(model, match)
            total = 0.0
            for ii in range(config.n_instances):
                rng = instance_rng(config.master_seed, config.kind, gi, ii, si)
                noisy = inject_noise(circ, noise, rng)
                state, _ = execute(noisy, rng)
                total += qec.p_err(state, spec, rng)
            p_hat = total / config.n_instances
            records.append(
                ResultRecord(
                    kind=config.kind,
                    code=config.code,
                    m=m,
                    ec=ec,
                    model=model,
                    p=match.p,
                    sigma=match.sigma,
                    kappa=match.kappa,
                    entropy=match.entropy,
                    p_err=p_hat,
                    stderr=binomial_stderr(p_hat, config.n_instances),
                    n_instances=config.n_instances,
                )
            )
    return sort_records(records)


def _grover_error(
    circ: Circuit,
    marked_index: int,
    noise: NoiseSpec,
    rng: np.random.Generator,
    metric_mode: str,
    n_shots: int,
) -> float:
    noisy = inject_noise(circ, noise, rng)
    state, _ = execute(noisy, rng)
    p_marked = float(np.abs(state.amps[marked_index]) ** 2)
    if metric_mode == "shots":
        probs = marginal_probs(state, list(range(circ.n_qubits)))
        counts = rng.multinomial(n_shots, probs / probs.sum())
        p_marked = counts[marked_index] / n_shots
    return 1.0 - p_marked


def run_grover_sweep(config: ExperimentConfig) -> list[ResultRecord]:
    """Probability of missing the marked state, per qubit count and noise model."""
    records = []
    combos = list(product(config.n_list, config.models))
    circ_cache = {}
    for n in config.n_list:
        marked = config.marked if config.marked else "1" * n
        override = optimal_iterations(n) if config.iterations == "optimal" else None
        circ_cache[n] = build_grover(GroverSpec(n, marked, override))
    for gi, p in enumerate(config.grid):
        match = _match_point(p)
        for si, (n, model) in enumerate(combos):
            circ = circ_cache[n]
            marked_index = int(circ.metadata["marked"], 2)
            noise = _noise_spec(model, match)
            total = 0.0
            for ii in range(config.n_instances):
                rng = instance_rng(config.master_seed, config.kind, gi, ii, si)
                total += _grover_error(
                    circ, marked_index, noise, rng, config.metric_mode, config.n_shots
                )
            err = total / config.n_instances
            records.append(
                ResultRecord(
                    kind=config.kind,
                    N=n,
                    model=model,
                    p=match.p,
                    sigma=match.sigma,
                    entropy=match.entropy,
                    gsa_err=err,
                    stderr=binomial_stderr(err, config.n_instances),
                    n_instances=config.n_instances,
                )
            )
    return sort_records(records)


def run_clifford_heatmap(config: ExperimentConfig) -> list[ResultRecord]:
    """Mean and variance of the approximation/full infidelity ratio per cell.

    Each cell holds `circuits_per_cell` random H+CNOT circuits; each circuit
    is run noiselessly, under full per-gate injection, and under the
    terminal-error approximation, with a fresh noise realization for both
    noisy runs.  Circuits whose full-model infidelity is exactly zero leave
    the ratio undefined and are counted out.
    """
    records = []
    sigma = config.sigma
    cells = list(product(config.h_grid, config.cnot_grid))
    for ci, (n_h, n_cnot) in enumerate(cells):
        ratios = []
        n_undefined = 0
        for k in range(config.circuits_per_cell):
            rng = instance_rng(config.master_seed, config.kind, ci, k)
            circ_seed = int(rng.integers(2**63))
            circ = build_random_clifford(
                RandomCliffordSpec(config.n_qubits, n_h, n_cnot, circ_seed)
            )
            ideal, _ = execute(circ, rng)
            model_state, _ = execute(inject_noise(circ, NoiseSpec.gaussian(sigma), rng), rng)
            result = propagate_variances(circ, sigma)
            empty_tail = Circuit(circ.n_qubits, circ.n_clbits, ())
            approx_circ = build_approx_circuit(circ, empty_tail, result, rng)
            approx_state, _ = execute(approx_circ, rng)
            f_model = infidelity(model_state, ideal)
            f_approx = infidelity(approx_state, ideal)
            if f_model <= _RATIO_FLOOR:
                n_undefined += 1
                continue
            ratios.append(f_approx / f_model)
        n_valid = len(ratios)
        mean = float(np.mean(ratios)) if n_valid else float("nan")
        var = float(np.var(ratios, ddof=1)) if n_valid > 1 else float("nan")
        records.append(
            ResultRecord(
                kind=config.kind,
                n_h=n_h,
                n_cnot=n_cnot,
                sigma=sigma,
                mean_ratio=mean,
                var_ratio=var,
                n_valid=n_valid,
                n_undefined=n_undefined,
            )
        )
    return sort_records(records)


def run_entropy_table(config: ExperimentConfig) -> list[ResultRecord]:
    """Matched (p, p_bf, kappa, sigma, entropy) rows for the grid."""
    records = []
    for p in config.grid:
        match = _match_point(p)
        records.append(
            ResultRecord(
                kind=config.kind,
                p=match.p,
                p_bf=match.p_bf,
                kappa=match.kappa,
                sigma=match.sigma,
                entropy=match.entropy,
            )
        )
    return sort_records(records)


_RUNNERS = {
    "qec_sweep": run_qec_sweep,
    "grover_sweep": run_grover_sweep,
    "clifford_heatmap": run_clifford_heatmap,
    "entropy_table": run_entropy_table,
}


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Dispatch on config.kind; write CSV when config.out is set."""
    records = _RUNNERS[config.kind](config)
    if config.out:
        write_csv(records, config.out, kind=config.kind)
    return records


def sort_records(records: list[ResultRecord]) -> list[ResultRecord]:
    if not records:
        return records
    keys = _SORT_KEYS[records[0].kind]
    return sorted(records, key=lambda r: tuple(getattr(r, k) for k in keys))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _format_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(records: list[ResultRecord], path: str, kind: str | None = None):
    """Header plus one row per record; floats at 17 significant digits."""
    if records:
        kind = records[0].kind
        if any(r.kind != kind for r in records):
            raise ConfigError("records of mixed kinds in one CSV")
    if kind is None:
        raise ConfigError("empty record list needs an explicit kind")
    columns = CSV_COLUMNS[kind]
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for r in records:
                writer.writerow([_format_value(getattr(r, c)) for c in columns])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path!r}: {exc}") from exc


def read_csv(path: str) -> list[ResultRecord]:
    """Parse a CSV written by `write_csv` back into records."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        kind = next((k for k, cols in CSV_COLUMNS.items() if cols == header), None)
        if kind is None:
            raise ConfigError(f"{path!r} does not match any known CSV schema")
        field_types = {f.name: f.type for f in fields(ResultRecord)}
        records = []
        for row in reader:
            kwargs = {"kind": kind}
            for col, val in zip(header, row):
                typ = field_types[col]
                kwargs[col] = int(val) if typ == "int" else (
                    float(val) if typ == "float" else val
                )
            records.append(ResultRecord(**kwargs))
    return records


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------
#
# One `key = value` pair per line, mirroring ExperimentConfig field-for-field;
# lists are comma separated; '#' starts a comment.


def load_config(path: str) -> ExperimentConfig:
    values: dict = {}
    with open(path) as fh:
        for ln_no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{ln_no}: expected 'key = value'")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return config_from_strings(values)


def config_from_strings(values: dict) -> ExperimentConfig:
    """Build a config from raw strings, converting per field type."""
    known = {f.name: f.type for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, val in values.items():
        if key not in known:
            raise ConfigError(f"unknown config field {key!r}")
        typ = known[key]
        if typ == "str":
            kwargs[key] = val
        elif typ == "int":
            kwargs[key] = int(val)
        elif typ == "float":
            kwargs[key] = float(val)
        elif typ == "tuple[float, ...]":
            kwargs[key] = tuple(float(x) for x in val.split(",") if x.strip())
        elif typ == "tuple[int, ...]":
            kwargs[key] = tuple(int(x) for x in val.split(",") if x.strip())
        else:
            raise ConfigError(f"unhandled config field type {typ!r} for {key!r}")
    if "kind" not in kwargs:
        raise ConfigError("config must set 'kind'")
    return ExperimentConfig(**kwargs)


def override_config(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Apply non-None overrides (CLI flags) on top of a config."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **clean) if clean else config
