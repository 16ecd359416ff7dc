"""Stabilizer codes, their subcircuits, lookup decoding, and the logical-error metric.

Two distance-3 codes are provided: the five-qubit perfect code (generators
XZZXI and its cyclic shifts) and the seven-qubit CSS code built from the
[7,4] Hamming checks.  Both use weight-n logicals X^n / Z^n, so |1_L> is
X_L|0_L> by construction.

A code experiment is the concatenation

    encoding  +  m x logical Hadamard  +  (ec=1: syndrome extraction + lookup
    corrections)

on data qubits 0..n-1 with one dedicated ancilla and classical bit per
generator.  Data qubits are never measured; the logical-error probability
compares the final data-qubit state against the noiseless run of the same
circuit, either by state overlap or by sampled Z-basis support membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import statevector as sv
from .circuits import (
    GATE_MATRICES,
    Circuit,
    GateOp,
    cnot,
    cond_pauli,
    cz,
    execute,
    execute_ops,
    h,
    measure,
    s,
    swap,
    z,
)

_SUPPORT_TOL = 1e-12


class CodeError(ValueError):
    """Raised for malformed code definitions or experiment specs."""


def pauli_weight(letters: str) -> int:
    return sum(1 for c in letters if c != "I")


def paulis_commute(a: str, b: str) -> bool:
    """Symplectic commutation test for two Pauli strings of equal length."""
    if len(a) != len(b):
        raise CodeError(f"length mismatch: {a!r} vs {b!r}")
    anti = sum(
        1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y
    )
    return anti % 2 == 0


def single_pauli(n: int, qubit: int, axis: str) -> str:
    return "I" * qubit + axis + "I" * (n - qubit - 1)


@dataclass(frozen=True)
class SyndromeTable:
    """Hard-decision lookup: syndrome bit-vector -> (qubit, axis) or None."""

    n_bits: int
    entries: dict

    def correction(self, syndrome: tuple[int, ...]):
        return self.entries.get(syndrome)

    def dump_text(self) -> str:
        """One line per assigned syndrome: bits -> correction, for golden tests."""
        lines = []
        for syn in sorted(self.entries):
            corr = self.entries[syn]
            label = "I" if corr is None else f"{corr[1]}{corr[0]}"
            lines.append("".join(str(b) for b in syn) + " " + label)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    k: int
    d: int
    generators: tuple[str, ...]
    logical_x: str
    logical_z: str
    syndrome_table: SyndromeTable

    def __post_init__(self):
        for i, g in enumerate(self.generators):
            for gg in self.generators[i + 1 :]:
                if not paulis_commute(g, gg):
                    raise CodeError(f"{self.name}: generators {g}, {gg} anticommute")
            if not paulis_commute(g, self.logical_x) or not paulis_commute(
                g, self.logical_z
            ):
                raise CodeError(f"{self.name}: logicals do not commute with {g}")
        if paulis_commute(self.logical_x, self.logical_z):
            raise CodeError(f"{self.name}: logical X and Z must anticommute")

    @property
    def n_generators(self) -> int:
        return len(self.generators)


def syndrome_of(code_generators: tuple[str, ...], error: str) -> tuple[int, ...]:
    """Anticommutation pattern of an error against each generator."""
    return tuple(0 if paulis_commute(g, error) else 1 for g in code_generators)


def _build_table(n: int, generators: tuple[str, ...]) -> SyndromeTable:
    entries: dict = {syndrome_of(generators, "I" * n): None}
    for qubit in range(n):
        for axis in ("X", "Y", "Z"):
            syn = syndrome_of(generators, single_pauli(n, qubit, axis))
            if syn in entries:
                raise CodeError(
                    f"syndrome clash at {axis}{qubit}: table is not single-error unique"
                )
            entries[syn] = (qubit, axis)
    # Unassigned syndromes (multi-qubit error classes) decode to identity.
    g = len(generators)
    for idx in range(1 << g):
        syn = tuple((idx >> i) & 1 for i in range(g))
        entries.setdefault(syn, None)
    return SyndromeTable(n_bits=g, entries=entries)


@lru_cache(maxsize=None)
def code_513() -> StabilizerCode:
    """Five-qubit perfect code: XZZXI and cyclic shifts, logicals X^5 / Z^5."""
    gens = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
    return StabilizerCode(
        name="513",
        n=5,
        k=1,
        d=3,
        generators=gens,
        logical_x="XXXXX",
        logical_z="ZZZZZ",
        syndrome_table=_build_table(5, gens),
    )


@lru_cache(maxsize=None)
def code_713() -> StabilizerCode:
    """Steane code: X- and Z-type generators on the Hamming check supports."""
    supports = ((3, 4, 5, 6), (1, 2, 5, 6), (0, 2, 4, 6))
    gens = tuple(
        "".join(axis if q in sup else "I" for q in range(7))
        for axis in ("X", "Z")
        for sup in supports
    )
    return StabilizerCode(
        name="713",
        n=7,
        k=1,
        d=3,
        generators=gens,
        logical_x="XXXXXXX",
        logical_z="ZZZZZZZ",
        syndrome_table=_build_table(7, gens),
    )


def get_code(code_id: str) -> StabilizerCode:
    if code_id == "513":
        return code_513()
    if code_id == "713":
        return code_713()
    raise CodeError(f"unknown code id {code_id!r} (want '513' or '713')")


# ---------------------------------------------------------------------------
# Subcircuits
# ---------------------------------------------------------------------------

# Qubit permutation closing the transversal-H step of the five-qubit code's
# logical Hadamard (1 -> 2 -> 4 -> 3 -> 1), realized as three SWAPs and
# validated by the logical-basis overlap checks below.
_LOGICAL_H_513_SWAPS = ((4, 3), (2, 4), (1, 2))


def _encoding_ops(code: StabilizerCode) -> tuple[GateOp, ...]:
    if code.name == "513":
        ops = [z(0)]
        ops += [h(q) for q in (1, 2, 3, 4)]
        ops += [cnot(c, 0) for c in (4, 3, 2, 1)]
        ops += [cz(0, 4), cz(1, 2), cz(3, 4), cz(0, 1), cz(2, 3)]
        return tuple(ops)
    if code.name == "713":
        ops = [h(q) for q in (4, 5, 6)]
        ops += [cnot(0, 1), cnot(0, 2)]
        ops += [cnot(6, 0), cnot(6, 1), cnot(6, 3)]
        ops += [cnot(5, 0), cnot(5, 2), cnot(5, 3)]
        ops += [cnot(4, 1), cnot(4, 2), cnot(4, 3)]
        return tuple(ops)
    raise CodeError(f"no encoding circuit for code {code.name!r}")


def build_encoding(code: StabilizerCode) -> Circuit:
    """Circuit preparing |0_L> from |0...0> on the code's data qubits."""
    return Circuit(code.n, 0, _encoding_ops(code), {"builder": f"encode_{code.name}"})


def _logical_h_ops(code: StabilizerCode) -> tuple[GateOp, ...]:
    ops = [h(q) for q in range(code.n)]
    if code.name == "513":
        ops += [swap(a, b) for a, b in _LOGICAL_H_513_SWAPS]
    return tuple(ops)


def build_logical_h(code: StabilizerCode) -> Circuit:
    """Logical Hadamard exchanging |0_L>/|1_L> with |+_L>/|-_L>.

    Transversal for the seven-qubit code; transversal H plus a SWAP
    permutation for the five-qubit code.  The construction is checked once
    per code against the logical-basis overlaps and a failure raises at
    assembly time.
    """
    _verify_logical_h(code.name)
    return Circuit(
        code.n, 0, _logical_h_ops(code), {"builder": f"logical_h_{code.name}"}
    )


def build_syndrome_extraction(code: StabilizerCode) -> tuple[Circuit, dict]:
    """One-ancilla-per-generator extraction circuit and its ancilla map.

    Ancilla i sits at qubit n+i, is prepared in |+>, picks up the i-th
    generator through controlled Paulis (CNOT for X letters, CZ for Z, both
    plus an ancilla S for Y), and is measured into classical bit i.
    """
    n = code.n
    g = code.n_generators
    ops: list[GateOp] = []
    ancilla_map = {}
    for i, gen in enumerate(code.generators):
        anc = n + i
        ancilla_map[i] = {"ancilla": anc, "clbit": i}
        ops.append(h(anc))
        for q, letter in enumerate(gen):
            if letter == "X":
                ops.append(cnot(anc, q))
            elif letter == "Z":
                ops.append(cz(anc, q))
            elif letter == "Y":
                ops += [cnot(anc, q), cz(anc, q), s(anc)]
        ops.append(h(anc))
        ops.append(measure(anc, i))
    circ = Circuit(n + g, g, tuple(ops), {"builder": f"extract_{code.name}"})
    return circ, ancilla_map


def build_correction_ops(code: StabilizerCode) -> tuple[GateOp, ...]:
    """COND_PAULI ops applying the lookup correction for each nonzero syndrome."""
    ops = []
    for syn in sorted(code.syndrome_table.entries):
        corr = code.syndrome_table.entries[syn]
        if corr is None:
            continue
        qubit, axis = corr
        condition = tuple((i, bit) for i, bit in enumerate(syn))
        ops.append(cond_pauli(qubit, axis, condition))
    return tuple(ops)


# ---------------------------------------------------------------------------
# Code experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeExperimentSpec:
    """Code id, logical-Hadamard count m, ec flag, and the error metric mode."""

    code: str
    m: int
    ec: int
    metric_mode: str = "overlap"
    n_shots: int = 100

    def __post_init__(self):
        get_code(self.code)
        if self.m < 0:
            raise CodeError(f"m={self.m} must be >= 0")
        if self.ec not in (0, 1):
            raise CodeError(f"ec={self.ec} must be 0 or 1")
        if self.metric_mode not in ("overlap", "shots"):
            raise CodeError(f"metric_mode={self.metric_mode!r}")
        if self.metric_mode == "shots" and self.n_shots < 1:
            raise CodeError("shots metric needs n_shots >= 1")


def build_code_blocks(spec: CodeExperimentSpec) -> tuple[Circuit, Circuit]:
    """(core, tail): noise-accumulating block and EC block, on equal registers.

    core = encoding + m logical Hadamards; tail = syndrome extraction plus
    conditional corrections when ec = 1, else empty.  Ancilla qubits exist in
    both registers (idle in the core) so the blocks concatenate directly.
    """
    code = get_code(spec.code)
    n_total = code.n + (code.n_generators if spec.ec else 0)
    n_clbits = code.n_generators if spec.ec else 0
    core_ops = list(_encoding_ops(code))
    hl_ops = _logical_h_ops(code)
    _verify_logical_h(code.name)
    for _ in range(spec.m):
        core_ops.extend(hl_ops)
    meta = {"builder": "code_experiment", "code": spec.code, "m": spec.m, "ec": spec.ec}
    core = Circuit(n_total, n_clbits, tuple(core_ops), meta)
    tail_ops: tuple[GateOp, ...] = ()
    if spec.ec:
        extraction, _ = build_syndrome_extraction(code)
        tail_ops = extraction.ops + build_correction_ops(code)
    tail = Circuit(n_total, n_clbits, tail_ops, dict(meta))
    return core, tail


def build_code_circuit(spec: CodeExperimentSpec) -> Circuit:
    """Full experiment circuit (data qubits left unmeasured)."""
    core, tail = build_code_blocks(spec)
    return core.concat(tail)


def accumulation_block(spec: CodeExperimentSpec, include_encoding: bool = True) -> Circuit:
    """Sub-circuit over which the analytic approximation accumulates noise.

    By default the window covers encoding plus the m logical Hadamards; with
    ``include_encoding=False`` only the logical-Hadamard block contributes,
    treating the encoder as noiseless for the purpose of variance tracking.
    Registers match `build_code_blocks`, so the result feeds directly into
    `propagation.propagate_variances`.
    """
    code = get_code(spec.code)
    n_total = code.n + (code.n_generators if spec.ec else 0)
    n_clbits = code.n_generators if spec.ec else 0
    ops: list[GateOp] = [] if not include_encoding else list(_encoding_ops(code))
    hl_ops = _logical_h_ops(code)
    for _ in range(spec.m):
        ops.extend(hl_ops)
    return Circuit(n_total, n_clbits, tuple(ops), {"builder": "accumulation_block"})


def data_state(state: sv.StateVector, n_data: int) -> sv.StateVector:
    """Pure state of the data register, slicing collapsed ancillas.

    Ancillas occupy the high qubits and are in a computational basis state
    after measurement, so the joint state factorizes; the slice at the
    dominant ancilla configuration recovers the data-qubit state.
    """
    if state.n_qubits == n_data:
        return state.copy()
    rows = state.amps.reshape(-1, 1 << n_data)
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    r = int(np.argmax(weights))
    amps = rows[r] / np.sqrt(weights[r])
    return sv.StateVector(n_data, amps.copy())


@lru_cache(maxsize=None)
def expected_data_state(spec: CodeExperimentSpec) -> sv.StateVector:
    """Noiseless final data-qubit state of the experiment circuit."""
    circ = build_code_circuit(spec)
    state, _ = execute(circ, np.random.default_rng(0))
    return data_state(state, get_code(spec.code).n)


@lru_cache(maxsize=None)
def expected_support(spec: CodeExperimentSpec) -> frozenset:
    """Basis indices carrying weight in the expected data state."""
    exp = expected_data_state(spec)
    probs = np.abs(exp.amps) ** 2
    return frozenset(int(i) for i in np.nonzero(probs > _SUPPORT_TOL)[0])


def p_err(
    final_state: sv.StateVector,
    spec: CodeExperimentSpec,
    rng: np.random.Generator | None = None,
) -> float:
    """Logical error probability 1 - P(expected) of one executed instance.

    overlap mode: infidelity of the final data state against the noiseless
    run's data state.  shots mode: fraction of n_shots Z-basis data samples
    landing outside the expected state's support (needs an rng).
    """
    code = get_code(spec.code)
    if spec.metric_mode == "overlap":
        final = data_state(final_state, code.n)
        return sv.infidelity(expected_data_state(spec), final)
    if rng is None:
        raise CodeError("shots metric requires an rng")
    probs = sv.marginal_probs(final_state, list(range(code.n)))
    probs = probs / probs.sum()
    counts = rng.multinomial(spec.n_shots, probs)
    support = expected_support(spec)
    bad = sum(int(c) for i, c in enumerate(counts) if c and i not in support)
    return bad / spec.n_shots


@lru_cache(maxsize=None)
def _verify_logical_h(code_name: str):
    """Assembly-time check: H_L maps |0_L> <-> |+_L> within 1e-10."""
    code = get_code(code_name)
    rng = np.random.default_rng(0)
    enc = Circuit(code.n, 0, _encoding_ops(code))
    zero_l, _ = execute(enc, rng)
    one_l = zero_l.copy()
    for q, letter in enumerate(code.logical_x):
        if letter != "I":
            sv.apply_1q(one_l, GATE_MATRICES[letter], q)
    plus_l = sv.StateVector(code.n, (zero_l.amps + one_l.amps) / np.sqrt(2.0))
    hl = _logical_h_ops(code)

    def apply_hl(state):
        out = state.copy()
        execute_ops(out, hl, [], rng)
        return out

    if sv.infidelity(plus_l, apply_hl(zero_l)) > 1e-10 or sv.infidelity(
        zero_l, apply_hl(plus_l)
    ) > 1e-10:
        raise CodeError(f"logical Hadamard construction fails for code {code_name}")
