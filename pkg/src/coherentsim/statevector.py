"""Dense n-qubit state-vector engine.

Bit-order convention, used by every module in this package: qubit ``q``
occupies bit ``q`` of the basis-state index, i.e. qubit 0 is the least
significant bit.  Basis-state strings are written in ket order, so
``"10"`` on two qubits means qubit 1 = 1, qubit 0 = 0, which is index 2.

States are renormalized only after measurement collapse, never after
gates, so any unitarity violation stays visible.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24

# Smallest branch probability the collapse is willing to divide by.
_MIN_BRANCH_PROB = 1e-14


class SimulationError(RuntimeError):
    """Raised on invalid operands or numerically degenerate collapse."""


@dataclass(frozen=True)
class MeasurementRecord:
    """Ordered classical outcomes, optionally with their branch probabilities."""

    bits: tuple[int, ...]
    probabilities: tuple[float, ...] | None = None

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise SimulationError(f"bits must be 0/1, got {self.bits}")


class StateVector:
    """2^n complex amplitudes over n qubits."""

    __slots__ = ("n_qubits", "amps")

    def __init__(self, n_qubits: int, amps: np.ndarray):
        if not (1 <= n_qubits <= MAX_QUBITS):
            raise SimulationError(f"n_qubits={n_qubits} outside [1, {MAX_QUBITS}]")
        if amps.shape != (1 << n_qubits,):
            raise SimulationError(
                f"amplitude array has shape {amps.shape}, expected (2^{n_qubits},)"
            )
        self.n_qubits = n_qubits
        self.amps = amps

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def _check_qubit(self, q: int):
        if not (0 <= q < self.n_qubits):
            raise SimulationError(f"qubit {q} out of range for n={self.n_qubits}")


def init_basis(n_qubits: int, bitstring: str) -> StateVector:
    """Computational basis state |bitstring> (ket order: leftmost char = qubit n-1)."""
    if len(bitstring) != n_qubits:
        raise SimulationError(
            f"bitstring {bitstring!r} has length {len(bitstring)}, expected {n_qubits}"
        )
    if any(c not in "01" for c in bitstring):
        raise SimulationError(f"bitstring {bitstring!r} must be over {{0,1}}")
    idx = int(bitstring, 2)
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[idx] = 1.0
    return StateVector(n_qubits, amps)


def apply_1q(state: StateVector, matrix: np.ndarray, q: int, validate: bool = False) -> StateVector:
    """Apply a 2x2 matrix to qubit q, in place.  Returns the state for chaining."""
    state._check_qubit(q)
    if validate:
        err = np.max(np.abs(matrix.conj().T @ matrix - np.eye(2)))
        if err > 1e-10:
            raise SimulationError(f"matrix is not unitary (deviation {err:.2e})")
    a = state.amps.reshape(-1, 2, 1 << q)
    lo = a[:, 0, :].copy()
    hi = a[:, 1, :]
    a[:, 0, :] = matrix[0, 0] * lo + matrix[0, 1] * hi
    a[:, 1, :] = matrix[1, 0] * lo + matrix[1, 1] * hi
    return state


def _check_distinct(state: StateVector, qubits: tuple[int, ...]):
    for q in qubits:
        state._check_qubit(q)
    if len(set(qubits)) != len(qubits):
        raise SimulationError(f"duplicate qubits in {qubits}")


def apply_controlled(state: StateVector, kind: str, qubits: tuple[int, ...]) -> StateVector:
    """Apply CNOT, CZ, SWAP or MCZ (multi-controlled Z over all listed qubits)."""
    _check_distinct(state, qubits)
    amps = state.amps
    idx = np.arange(amps.size)
    if kind == "CNOT":
        c, t = qubits
        src = np.nonzero(((idx >> c) & 1 == 1) & ((idx >> t) & 1 == 0))[0]
        dst = src | (1 << t)
        amps[src], amps[dst] = amps[dst], amps[src].copy()
    elif kind == "CZ":
        a, b = qubits
        hit = ((idx >> a) & 1 == 1) & ((idx >> b) & 1 == 1)
        amps[hit] *= -1.0
    elif kind == "SWAP":
        a, b = qubits
        src = np.nonzero(((idx >> a) & 1 == 1) & ((idx >> b) & 1 == 0))[0]
        dst = (src ^ (1 << a)) | (1 << b)
        amps[src], amps[dst] = amps[dst], amps[src].copy()
    elif kind == "MCZ":
        mask = 0
        for q in qubits:
            mask |= 1 << q
        hit = (idx & mask) == mask
        amps[hit] *= -1.0
    else:
        raise SimulationError(f"unknown controlled gate kind {kind!r}")
    return state


def measure(state: StateVector, q: int, rng: np.random.Generator) -> int:
    """Projective Z measurement of qubit q with collapse; returns the outcome bit.

    The outcome is drawn by inverse transform from the exact marginal, so a
    seeded generator reproduces the same branch every time.
    """
    state._check_qubit(q)
    a = state.amps.reshape(-1, 2, 1 << q)
    p1 = float(np.sum(np.abs(a[:, 1, :]) ** 2))
    outcome = 1 if rng.random() < p1 else 0
    p_branch = p1 if outcome == 1 else 1.0 - p1
    if p_branch < _MIN_BRANCH_PROB:
        raise SimulationError(
            f"collapse onto branch {outcome} of qubit {q} with probability {p_branch:.3e}"
        )
    a[:, 1 - outcome, :] = 0.0
    state.amps /= math.sqrt(p_branch)
    return outcome


def measure_all(
    state: StateVector, qubits: list[int], rng: np.random.Generator
) -> MeasurementRecord:
    """Sequentially measure and collapse the listed qubits."""
    bits = []
    probs = []
    for q in qubits:
        a = state.amps.reshape(-1, 2, 1 << q)
        p1 = float(np.sum(np.abs(a[:, 1, :]) ** 2))
        bit = measure(state, q, rng)
        bits.append(bit)
        probs.append(p1 if bit == 1 else 1.0 - p1)
    return MeasurementRecord(bits=tuple(bits), probabilities=tuple(probs))


def overlap(a: StateVector, b: StateVector) -> complex:
    """Inner product <a|b>."""
    if a.n_qubits != b.n_qubits:
        raise SimulationError(
            f"overlap of {a.n_qubits}- and {b.n_qubits}-qubit states"
        )
    return complex(np.vdot(a.amps, b.amps))


def infidelity(a: StateVector, b: StateVector) -> float:
    """1 - |<a|b>|^2, clamped into [0, 1]."""
    f = abs(overlap(a, b)) ** 2
    return min(1.0, max(0.0, 1.0 - f))


def marginal_probs(state: StateVector, qubits: list[int]) -> np.ndarray:
    """Joint outcome distribution of the listed qubits.

    Entry ``o`` is the probability that qubits[j] reads bit j of ``o``
    (qubits[0] = least significant bit of the outcome index).
    """
    _check_distinct(state, tuple(qubits))
    probs = np.abs(state.amps) ** 2
    idx = np.arange(probs.size)
    keys = np.zeros(probs.size, dtype=np.int64)
    for j, q in enumerate(qubits):
        keys |= ((idx >> q) & 1) << j
    out = np.bincount(keys, weights=probs, minlength=1 << len(qubits))
    return out


def sample_shots(
    state: StateVector, qubits: list[int], n_shots: int, rng: np.random.Generator
) -> Counter:
    """n_shots joint Z-basis samples of the listed qubits, without collapsing.

    Keys are bitstrings with ``key[j]`` the value of ``qubits[j]``.
    """
    if n_shots == 0:
        return Counter()
    probs = marginal_probs(state, qubits)
    probs = probs / probs.sum()
    counts = rng.multinomial(n_shots, probs)
    k = len(qubits)
    out = Counter()
    for o in np.nonzero(counts)[0]:
        key = "".join(str((int(o) >> j) & 1) for j in range(k))
        out[key] = int(counts[o])
    return out
