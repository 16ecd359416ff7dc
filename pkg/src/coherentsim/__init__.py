"""Coherent-noise circuit simulation with entropy-matched Pauli comparison.

Submodules:
    noise        vMF / Gaussian rotation errors, Pauli channel, entropy matching
    statevector  dense n-qubit simulation engine
    circuits     gate IR, execution, noise injection, Grover and random Clifford builders
    qec          [[5,1,3]] and [[7,1,3]] codes, subcircuits, lookup decoding, error metric
    propagation  analytic variance tracking, Jacobian view, terminal-error circuits
    harness      experiment configs, sweep runners, deterministic seeding, CSV
    report       matplotlib figures for experiment CSVs
"""

from .circuits import (
    Circuit,
    GateOp,
    GroverSpec,
    RandomCliffordSpec,
    build_grover,
    build_random_clifford,
    execute,
    inject_noise,
    optimal_iterations,
    paper_iterations,
)
from .harness import ExperimentConfig, ResultRecord, run_experiment
from .noise import (
    AngleSample,
    ChannelMatch,
    NoiseSpec,
    binary_entropy,
    error_unitary,
    langevin,
    match_channels,
    match_kappa,
    pbf_pauli,
    pbf_vmf,
    sigma_from_kappa,
)
from .propagation import (
    PropagationResult,
    QubitErrorTrack,
    build_approx_circuit,
    jacobian,
    propagate_variances,
    sample_terminal_errors,
)
from .qec import (
    CodeExperimentSpec,
    StabilizerCode,
    accumulation_block,
    build_code_circuit,
    code_513,
    code_713,
    p_err,
)
from .statevector import StateVector, init_basis, overlap, sample_shots

__version__ = "0.1.0"

__all__ = [
    "AngleSample",
    "ChannelMatch",
    "Circuit",
    "CodeExperimentSpec",
    "ExperimentConfig",
    "GateOp",
    "GroverSpec",
    "NoiseSpec",
    "PropagationResult",
    "QubitErrorTrack",
    "RandomCliffordSpec",
    "ResultRecord",
    "StabilizerCode",
    "StateVector",
    "accumulation_block",
    "binary_entropy",
    "build_approx_circuit",
    "build_code_circuit",
    "build_grover",
    "build_random_clifford",
    "code_513",
    "code_713",
    "error_unitary",
    "execute",
    "init_basis",
    "inject_noise",
    "jacobian",
    "langevin",
    "match_channels",
    "match_kappa",
    "optimal_iterations",
    "overlap",
    "p_err",
    "paper_iterations",
    "pbf_pauli",
    "pbf_vmf",
    "propagate_variances",
    "run_experiment",
    "sample_shots",
    "sample_terminal_errors",
    "sigma_from_kappa",
]
