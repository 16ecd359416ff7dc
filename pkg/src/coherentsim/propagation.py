"""Analytic propagation of coherent-error distributions through Clifford circuits.

Instead of Monte Carlo sampling an error rotation after every gate, each
qubit carries the variances (var_theta, var_phi) of its accumulated angular
error.  Per-gate update rules:

    H on qubit i:   (var_theta, var_phi) <- (var_phi + s^2, var_theta + s^2)
                    (the Hadamard swaps the Bloch-sphere axes, then adds its
                    own per-gate noise s^2)
    SWAP:           the two qubits exchange their tracks
    X, Y, Z, S:     unchanged (sign flips are absorbed by zero-mean Gaussians)
    CNOT, CZ, MCZ:  unchanged (two-qubit gates are noiseless and the induced
                    error correlations are deliberately ignored)
    MEASURE, COND_PAULI: ignored

Tracking variances directly is equivalent to the angle-rescaling picture but
has no singularity at zero prior width.  Terminal errors are then sampled
once per qubit and inserted between a noiseless core and tail circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, GateOp, error_rotation
from .noise import AngleSample


class PropagationError(ValueError):
    """Raised when the circuit contains a gate the tracker cannot handle."""


@dataclass(frozen=True)
class QubitErrorTrack:
    """Accumulated per-qubit error variances, in radians^2."""

    var_theta: float
    var_phi: float

    def __post_init__(self):
        if self.var_theta < 0.0 or self.var_phi < 0.0:
            raise PropagationError(f"negative variance in {self}")


@dataclass(frozen=True)
class PropagationResult:
    tracks: tuple[QubitErrorTrack, ...]
    jacobian: np.ndarray | None = None

    @property
    def n_qubits(self) -> int:
        return len(self.tracks)


_NOOP_KINDS = {"X", "Y", "Z", "S", "CNOT", "CZ", "MCZ", "MEASURE", "COND_PAULI"}


def _check_kind(op: GateOp):
    if op.kind in ("ERROR_ROTATION", "PAULI"):
        raise PropagationError(
            f"cannot propagate through pre-injected noise op {op.kind}"
        )
    if op.kind not in _NOOP_KINDS and op.kind not in ("H", "SWAP"):
        raise PropagationError(f"unsupported gate kind {op.kind!r}")


def propagate_variances(
    circuit: Circuit, sigma_h: float, with_jacobian: bool = False
) -> PropagationResult:
    """Run the variance update rules over the circuit from all-zero tracks."""
    if sigma_h < 0.0:
        raise PropagationError(f"sigma_h={sigma_h} must be >= 0")
    s2 = sigma_h * sigma_h
    var = np.zeros((circuit.n_qubits, 2))  # columns: theta, phi
    for op in circuit.ops:
        _check_kind(op)
        if op.kind == "H":
            q = op.qubits[0]
            var[q, 0], var[q, 1] = var[q, 1] + s2, var[q, 0] + s2
        elif op.kind == "SWAP":
            a, b = op.qubits
            var[[a, b]] = var[[b, a]]
    tracks = tuple(QubitErrorTrack(float(v[0]), float(v[1])) for v in var)
    jac = jacobian(circuit) if with_jacobian else None
    return PropagationResult(tracks=tracks, jacobian=jac)


def jacobian(circuit: Circuit) -> np.ndarray:
    """Linear map M sending initial angles z = (theta_1..n, phi_1..n) to final angles.

    M is a product of per-gate factors, each a composition of coordinate
    swaps and positive diagonal scalings, and is independent of the noise
    width: with z drawn componentwise from N(0, s^2), the second moments of
    M z equal the tracks of ``propagate_variances(circuit, s)`` on every
    component with a nonzero track.  Components the circuit never feeds
    noise into keep identity rows and pass the input prior through
    unchanged, which is the matrix picture's stand-in for a zero track.

    A Hadamard swaps a qubit's two coordinates and rescales each by
    sqrt((k+1)/k), where k counts the noise units already carried; at k = 0
    the rescale degenerates to 1 and the factor is the bare swap, which is
    how the zero-prior-width singularity of the rescaling picture resolves.
    """
    n = circuit.n_qubits
    m = np.eye(2 * n)
    counts = np.zeros(2 * n, dtype=np.int64)  # rows: theta_0..n-1, phi_0..n-1
    for op in circuit.ops:
        _check_kind(op)
        if op.kind == "H":
            q = op.qubits[0]
            ti, pi = q, n + q
            row_t, row_p = m[ti].copy(), m[pi].copy()
            kt, kp = counts[ti], counts[pi]
            scale_t = np.sqrt((kp + 1) / kp) if kp > 0 else 1.0
            scale_p = np.sqrt((kt + 1) / kt) if kt > 0 else 1.0
            m[ti] = row_p * scale_t
            m[pi] = row_t * scale_p
            counts[ti], counts[pi] = kp + 1, kt + 1
        elif op.kind == "SWAP":
            a, b = op.qubits
            for off in (0, n):
                m[[off + a, off + b]] = m[[off + b, off + a]]
                counts[[off + a, off + b]] = counts[[off + b, off + a]]
    return m


def sample_terminal_errors(
    result: PropagationResult, rng: np.random.Generator
) -> list[AngleSample]:
    """One independent (theta, phi) ~ N(0, tracked variances) pair per qubit."""
    out = []
    for track in result.tracks:
        theta = rng.normal(0.0, np.sqrt(track.var_theta))
        phi = rng.normal(0.0, np.sqrt(track.var_phi))
        out.append(AngleSample(float(theta), float(phi)))
    return out


def build_approx_circuit(
    core: Circuit,
    tail: Circuit,
    result: PropagationResult,
    rng: np.random.Generator,
) -> Circuit:
    """Noiseless core, one sampled terminal ERROR_ROTATION per qubit, noiseless tail."""
    if (core.n_qubits, core.n_clbits) != (tail.n_qubits, tail.n_clbits):
        raise PropagationError(
            f"core register ({core.n_qubits},{core.n_clbits}) differs from "
            f"tail ({tail.n_qubits},{tail.n_clbits})"
        )
    if result.n_qubits != core.n_qubits:
        raise PropagationError(
            f"{result.n_qubits} tracks for a {core.n_qubits}-qubit circuit"
        )
    angles = sample_terminal_errors(result, rng)
    err_ops = tuple(
        error_rotation(q, a.theta, a.phi, a.phi) for q, a in enumerate(angles)
    )
    meta = dict(core.metadata)
    meta["approximation"] = "terminal_errors"
    return Circuit(core.n_qubits, core.n_clbits, core.ops + err_ops + tail.ops, meta)


def tracks_text(result: PropagationResult) -> str:
    """One 'qubit var_theta var_phi' line per qubit, for regression files."""
    lines = [
        f"{q} {t.var_theta!r} {t.var_phi!r}" for q, t in enumerate(result.tracks)
    ]
    return "\n".join(lines) + "\n"
