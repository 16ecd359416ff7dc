"""Gate IR, circuit execution, noise injection, and circuit builders.

A `Circuit` is an ordered list of `GateOp` over ``n_qubits`` qubits and
``n_clbits`` classical bits; it is the single representation consumed by
execution, noise injection and variance propagation.  Circuits are
immutable once constructed.

Noise injection follows the coherent-error simulation recipe: every
single-qubit gate (H, X, Y, Z, S) is followed by a sampled error op, while
multi-qubit gates and measurements are left untouched.  For the continuous
families the error op is an ERROR_ROTATION with reduced-form phases
(theta, phi, phi); for the Pauli channel one X/Y/Z is appended with
probability p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import statevector as sv
from .noise import (
    NoiseSpec,
    error_unitary,
    sample_gaussian_angles,
    sample_pauli,
    sample_vmf_angles,
)

SINGLE_QUBIT_GATES = ("H", "X", "Y", "Z", "S")
MULTI_QUBIT_GATES = ("CNOT", "CZ", "SWAP", "MCZ")

_SQRT1_2 = 1.0 / math.sqrt(2.0)
GATE_MATRICES = {
    "H": np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
}


class CircuitError(ValueError):
    """Raised for malformed ops, invalid builder specs, or bad serialized text."""


@dataclass(frozen=True)
class GateOp:
    """One circuit operation.

    ``params`` holds the (theta, alpha, beta) of an ERROR_ROTATION; ``axis``
    the Pauli letter of PAULI/COND_PAULI; ``clbit`` the classical target of a
    MEASURE; ``condition`` the (clbit, value) conjunction guarding a
    COND_PAULI.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    axis: str = ""
    clbit: int = -1
    condition: tuple[tuple[int, int], ...] = ()


def h(q: int) -> GateOp:
    return GateOp("H", (q,))


def x(q: int) -> GateOp:
    return GateOp("X", (q,))


def y(q: int) -> GateOp:
    return GateOp("Y", (q,))


def z(q: int) -> GateOp:
    return GateOp("Z", (q,))


def s(q: int) -> GateOp:
    return GateOp("S", (q,))


def cnot(c: int, t: int) -> GateOp:
    return GateOp("CNOT", (c, t))


def cz(a: int, b: int) -> GateOp:
    return GateOp("CZ", (a, b))


def swap(a: int, b: int) -> GateOp:
    return GateOp("SWAP", (a, b))


def mcz(*qubits: int) -> GateOp:
    return GateOp("MCZ", tuple(qubits))


def error_rotation(q: int, theta: float, alpha: float, beta: float) -> GateOp:
    return GateOp("ERROR_ROTATION", (q,), params=(theta, alpha, beta))


def pauli(q: int, axis: str) -> GateOp:
    return GateOp("PAULI", (q,), axis=axis)


def measure(q: int, clbit: int) -> GateOp:
    return GateOp("MEASURE", (q,), clbit=clbit)


def cond_pauli(q: int, axis: str, condition: tuple[tuple[int, int], ...]) -> GateOp:
    return GateOp("COND_PAULI", (q,), axis=axis, condition=tuple(condition))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits qubits and n_clbits classical bits."""

    n_qubits: int
    n_clbits: int
    ops: tuple[GateOp, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, op in enumerate(self.ops):
            self._validate_op(i, op)

    def _validate_op(self, i: int, op: GateOp):
        if any(not (0 <= q < self.n_qubits) for q in op.qubits):
            raise CircuitError(f"op {i} ({op.kind}): qubits {op.qubits} out of range")
        if op.kind in MULTI_QUBIT_GATES:
            want = 2 if op.kind != "MCZ" else None
            if want is not None and len(op.qubits) != want:
                raise CircuitError(f"op {i} ({op.kind}): expected 2 qubits")
            if op.kind == "MCZ" and len(op.qubits) < 1:
                raise CircuitError(f"op {i} (MCZ): needs at least 1 qubit")
            if len(set(op.qubits)) != len(op.qubits):
                raise CircuitError(f"op {i} ({op.kind}): duplicate qubits {op.qubits}")
        elif op.kind in SINGLE_QUBIT_GATES or op.kind in ("ERROR_ROTATION", "PAULI"):
            if len(op.qubits) != 1:
                raise CircuitError(f"op {i} ({op.kind}): expected 1 qubit")
        if op.kind == "ERROR_ROTATION" and len(op.params) != 3:
            raise CircuitError(f"op {i}: ERROR_ROTATION needs (theta, alpha, beta)")
        if op.kind in ("PAULI", "COND_PAULI") and op.axis not in ("X", "Y", "Z"):
            raise CircuitError(f"op {i} ({op.kind}): bad axis {op.axis!r}")
        if op.kind == "MEASURE" and not (0 <= op.clbit < self.n_clbits):
            raise CircuitError(f"op {i} (MEASURE): clbit {op.clbit} out of range")
        if op.kind == "COND_PAULI":
            for c, v in op.condition:
                if not (0 <= c < self.n_clbits) or v not in (0, 1):
                    raise CircuitError(
                        f"op {i} (COND_PAULI): bad condition term ({c}, {v})"
                    )
        known = (
            op.kind in SINGLE_QUBIT_GATES
            or op.kind in MULTI_QUBIT_GATES
            or op.kind in ("ERROR_ROTATION", "PAULI", "MEASURE", "COND_PAULI")
        )
        if not known:
            raise CircuitError(f"op {i}: unknown kind {op.kind!r}")

    def count_kind(self, kind: str) -> int:
        return sum(1 for op in self.ops if op.kind == kind)

    def concat(self, other: "Circuit") -> "Circuit":
        """Sequential composition; both circuits must share register sizes."""
        if (other.n_qubits, other.n_clbits) != (self.n_qubits, self.n_clbits):
            raise CircuitError(
                f"cannot concat ({self.n_qubits},{self.n_clbits}) with "
                f"({other.n_qubits},{other.n_clbits})"
            )
        return Circuit(
            self.n_qubits, self.n_clbits, self.ops + other.ops, dict(self.metadata)
        )


def apply_op(
    state: sv.StateVector, op: GateOp, clbits: list[int], rng: np.random.Generator
):
    """Apply one op to the state, updating clbits for MEASURE."""
    if op.kind in GATE_MATRICES:
        sv.apply_1q(state, GATE_MATRICES[op.kind], op.qubits[0])
    elif op.kind == "ERROR_ROTATION":
        sv.apply_1q(state, error_unitary(*op.params), op.qubits[0])
    elif op.kind == "PAULI":
        sv.apply_1q(state, GATE_MATRICES[op.axis], op.qubits[0])
    elif op.kind in MULTI_QUBIT_GATES:
        sv.apply_controlled(state, op.kind, op.qubits)
    elif op.kind == "MEASURE":
        clbits[op.clbit] = sv.measure(state, op.qubits[0], rng)
    elif op.kind == "COND_PAULI":
        if all(clbits[c] == v for c, v in op.condition):
            sv.apply_1q(state, GATE_MATRICES[op.axis], op.qubits[0])
    else:
        raise sv.SimulationError(f"unknown op kind {op.kind!r}")


def execute_ops(
    state: sv.StateVector,
    ops: tuple[GateOp, ...],
    clbits: list[int],
    rng: np.random.Generator,
):
    """Run a slice of ops on an existing state (used to resume cached prefixes)."""
    for i, op in enumerate(ops):
        try:
            apply_op(state, op, clbits, rng)
        except sv.SimulationError as exc:
            raise sv.SimulationError(f"op {i} ({op.kind} {op.qubits}): {exc}") from exc


def execute(
    circuit: Circuit, rng: np.random.Generator
) -> tuple[sv.StateVector, list[int]]:
    """Execute a circuit from |0...0>, returning the final state and classical bits."""
    state = sv.init_basis(circuit.n_qubits, "0" * circuit.n_qubits)
    clbits = [0] * circuit.n_clbits
    execute_ops(state, circuit.ops, clbits, rng)
    return state, clbits


def inject_noise(
    circuit: Circuit, spec: NoiseSpec, rng: np.random.Generator
) -> Circuit:
    """Insert sampled error ops after every single-qubit gate.

    Continuous models append ERROR_ROTATION(theta, phi, phi); the Pauli model
    appends one uniformly chosen X/Y/Z with probability p.  Multi-qubit gates,
    measurements, and conditional corrections are noiseless.  Original gates
    keep their order; a gaussian spec with sigma = 0 returns an op-identical
    circuit.
    """
    if spec.model == "gaussian" and spec.sigma == 0.0:
        return Circuit(
            circuit.n_qubits, circuit.n_clbits, circuit.ops, dict(circuit.metadata)
        )
    ops: list[GateOp] = []
    for op in circuit.ops:
        ops.append(op)
        if op.kind not in SINGLE_QUBIT_GATES:
            continue
        q = op.qubits[0]
        if spec.model == "pauli":
            axis = sample_pauli(spec.p, rng)
            if axis != "I":
                ops.append(pauli(q, axis))
        else:
            if spec.model == "gaussian":
                ang = sample_gaussian_angles(spec.sigma, rng)
            else:
                ang = sample_vmf_angles(spec.kappa, rng)
            ops.append(error_rotation(q, ang.theta, ang.phi, ang.phi))
    meta = dict(circuit.metadata)
    meta["noise_model"] = spec.model
    return Circuit(circuit.n_qubits, circuit.n_clbits, tuple(ops), meta)


# ---------------------------------------------------------------------------
# Grover search circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroverSpec:
    """Search over N qubits for the basis state |marked> (ket-order bitstring)."""

    N: int
    marked: str
    iterations_override: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise CircuitError(f"GroverSpec needs N >= 2, got {self.N}")
        if len(self.marked) != self.N or any(c not in "01" for c in self.marked):
            raise CircuitError(f"marked {self.marked!r} is not a {self.N}-bit string")


def paper_iterations(N: int) -> int:
    """Iteration count floor(pi*N/2 - 1/2)."""
    if N < 1:
        raise CircuitError(f"N={N} must be >= 1")
    return math.floor(math.pi * N / 2.0 - 0.5)


def optimal_iterations(N: int) -> int:
    """Standard optimal count round(pi / (4 asin(2^(-N/2))) - 1/2)."""
    if N < 1:
        raise CircuitError(f"N={N} must be >= 1")
    return math.floor(math.pi / (4.0 * math.asin(2.0 ** (-N / 2.0))) - 0.5 + 0.5)


def grover_success_probability(N: int, r: int) -> float:
    """Noiseless success probability sin^2((2r+1) asin(2^(-N/2))) of r iterations."""
    return math.sin((2 * r + 1) * math.asin(2.0 ** (-N / 2.0))) ** 2


def build_grover(spec: GroverSpec) -> "Circuit":
    """H layer, then r repetitions of [oracle][diffuser].

    The oracle conjugates an all-qubit MCZ with X gates on the qubits where
    the marked bit is 0; the diffuser is H^N X^N MCZ X^N H^N.
    """
    n = spec.N
    r = (
        spec.iterations_override
        if spec.iterations_override is not None
        else paper_iterations(n)
    )
    all_qubits = list(range(n))
    # marked is in ket order: marked[0] is qubit n-1.
    zero_qubits = [n - 1 - i for i, c in enumerate(spec.marked) if c == "0"]
    ops: list[GateOp] = [h(q) for q in all_qubits]
    for _ in range(r):
        for q in zero_qubits:
            ops.append(x(q))
        ops.append(mcz(*all_qubits))
        for q in zero_qubits:
            ops.append(x(q))
        for q in all_qubits:
            ops.append(h(q))
        for q in all_qubits:
            ops.append(x(q))
        ops.append(mcz(*all_qubits))
        for q in all_qubits:
            ops.append(x(q))
        for q in all_qubits:
            ops.append(h(q))
    meta = {"builder": "grover", "N": n, "marked": spec.marked, "iterations": r}
    return Circuit(n, 0, tuple(ops), meta)


# ---------------------------------------------------------------------------
# Random Clifford circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomCliffordSpec:
    """Fixed numbers of H and CNOT gates at uniformly random locations."""

    n_qubits: int
    n_hadamard: int
    n_cnot: int
    seed: int

    def __post_init__(self):
        if self.n_qubits < 1 or self.n_hadamard < 0 or self.n_cnot < 0:
            raise CircuitError(f"invalid RandomCliffordSpec {self}")
        if self.n_cnot > 0 and self.n_qubits < 2:
            raise CircuitError("CNOT gates need at least 2 qubits")


def build_random_clifford(spec: RandomCliffordSpec) -> Circuit:
    """Uniformly shuffled multiset of H and CNOT ops, fully determined by the seed."""
    rng = np.random.default_rng(spec.seed)
    kinds = np.array([0] * spec.n_hadamard + [1] * spec.n_cnot)
    rng.shuffle(kinds)
    n = spec.n_qubits
    ops: list[GateOp] = []
    for k in kinds:
        if k == 0:
            ops.append(h(int(rng.integers(n))))
        else:
            c = int(rng.integers(n))
            t = int(rng.integers(n - 1))
            if t >= c:
                t += 1
            ops.append(cnot(c, t))
    meta = {
        "builder": "random_clifford",
        "n_hadamard": spec.n_hadamard,
        "n_cnot": spec.n_cnot,
        "seed": spec.seed,
    }
    return Circuit(n, 0, tuple(ops), meta)


# ---------------------------------------------------------------------------
# Line-oriented text serialization
# ---------------------------------------------------------------------------
#
# Grammar (one op per line, whitespace separated):
#   qubits N            header, required first
#   clbits M            header, required second
#   H|X|Y|Z|S q
#   CNOT c t | CZ a b | SWAP a b
#   MCZ q0 q1 [...]
#   ERROR_ROTATION q theta alpha beta
#   PAULI q axis
#   MEASURE q clbit
#   COND_PAULI q axis clbit:val [clbit:val ...]
# Lines starting with '#' and blank lines are ignored.


def to_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}", f"clbits {circuit.n_clbits}"]
    for op in circuit.ops:
        if op.kind == "ERROR_ROTATION":
            t, a, b = op.params
            lines.append(f"ERROR_ROTATION {op.qubits[0]} {t!r} {a!r} {b!r}")
        elif op.kind == "PAULI":
            lines.append(f"PAULI {op.qubits[0]} {op.axis}")
        elif op.kind == "MEASURE":
            lines.append(f"MEASURE {op.qubits[0]} {op.clbit}")
        elif op.kind == "COND_PAULI":
            cond = " ".join(f"{c}:{v}" for c, v in op.condition)
            lines.append(f"COND_PAULI {op.qubits[0]} {op.axis} {cond}".rstrip())
        else:
            lines.append(" ".join([op.kind] + [str(q) for q in op.qubits]))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if len(lines) < 2 or not lines[0].startswith("qubits ") or not lines[1].startswith("clbits "):
        raise CircuitError("circuit text must start with 'qubits N' and 'clbits M'")
    n_qubits = int(lines[0].split()[1])
    n_clbits = int(lines[1].split()[1])
    ops: list[GateOp] = []
    for ln in lines[2:]:
        parts = ln.split()
        kind = parts[0]
        if kind in SINGLE_QUBIT_GATES:
            ops.append(GateOp(kind, (int(parts[1]),)))
        elif kind in ("CNOT", "CZ", "SWAP"):
            ops.append(GateOp(kind, (int(parts[1]), int(parts[2]))))
        elif kind == "MCZ":
            ops.append(GateOp(kind, tuple(int(q) for q in parts[1:])))
        elif kind == "ERROR_ROTATION":
            ops.append(
                error_rotation(
                    int(parts[1]), float(parts[2]), float(parts[3]), float(parts[4])
                )
            )
        elif kind == "PAULI":
            ops.append(pauli(int(parts[1]), parts[2]))
        elif kind == "MEASURE":
            ops.append(measure(int(parts[1]), int(parts[2])))
        elif kind == "COND_PAULI":
            cond = tuple(
                (int(term.split(":")[0]), int(term.split(":")[1])) for term in parts[3:]
            )
            ops.append(cond_pauli(int(parts[1]), parts[2], cond))
        else:
            raise CircuitError(f"cannot parse line {ln!r}")
    return Circuit(n_qubits, n_clbits, tuple(ops))
