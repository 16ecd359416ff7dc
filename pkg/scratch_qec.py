"""Dev scratch: validate encoder constructions and find the 513 logical-H permutation."""
import itertools

import numpy as np

from coherentsim import circuits as cc
from coherentsim import statevector as sv

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": cc.GATE_MATRICES["X"],
    "Y": cc.GATE_MATRICES["Y"],
    "Z": cc.GATE_MATRICES["Z"],
}


def apply_pauli_string(state, letters):
    out = state.copy()
    for q, letter in enumerate(letters):
        if letter != "I":
            sv.apply_1q(out, PAULI_1Q[letter], q)
    return out


def eig_check(state, letters):
    return sv.overlap(state, apply_pauli_string(state, letters))


# ---------------- [[5,1,3]] ----------------
GEN5 = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]

def encode5_ops():
    ops = [cc.z(0)]
    ops += [cc.h(q) for q in (1, 2, 3, 4)]
    ops += [cc.cnot(c, 0) for c in (4, 3, 2, 1)]
    ops.append(cc.cz(0, 4))
    ops += [cc.cz(1, 2), cc.cz(3, 4)]
    ops += [cc.cz(0, 1), cc.cz(2, 3)]
    return ops

rng = np.random.default_rng(0)
circ5 = cc.Circuit(5, 0, tuple(encode5_ops()))
psi0, _ = cc.execute(circ5, rng)
print("[[5,1,3]] generator eigenvalues:", [f"{eig_check(psi0, g).real:+.6f}" for g in GEN5])
print("Z_L eigenvalue:", eig_check(psi0, "ZZZZZ"))

psi1 = apply_pauli_string(psi0, "XXXXX")
plus = psi0.copy()
plus.amps = (psi0.amps + psi1.amps) / np.sqrt(2)
minus = psi0.copy()
minus.amps = (psi0.amps - psi1.amps) / np.sqrt(2)

# search permutations: U = perm o H^5; want U|0L> ~ |+L> and U|+L> ~ |0L>
def transversal_h(state):
    out = state.copy()
    for q in range(5):
        sv.apply_1q(out, cc.GATE_MATRICES["H"], q)
    return out

def permute_qubits(state, perm):
    """perm[i] = destination qubit of qubit i."""
    t = state.amps.reshape([2] * 5)  # axes [q4, q3, q2, q1, q0]
    # axis of qubit q is 4 - q; moving qubit i -> perm[i] means axis 4-i -> 4-perm[i]
    src = [4 - i for i in range(5)]
    dst = [4 - perm[i] for i in range(5)]
    out = state.copy()
    out.amps = np.moveaxis(t, src, dst).reshape(-1).copy()
    return out

h0 = transversal_h(psi0)
hplus = transversal_h(plus)
found = []
for perm in itertools.permutations(range(5)):
    u0 = permute_qubits(h0, perm)
    a = abs(sv.overlap(plus, u0)) ** 2
    if a > 1 - 1e-9:
        uplus = permute_qubits(hplus, perm)
        b = abs(sv.overlap(psi0, uplus)) ** 2
        if b > 1 - 1e-9:
            found.append(perm)
print("valid permutations (perm[i]=destination of qubit i):", found)

# decompose first permutation into swaps
if found:
    perm = found[0]
    print("chosen:", perm)

# ---------------- [[7,1,3]] ----------------
GEN7 = [
    "IIIXXXX",  # X on {3,4,5,6}
    "IXXIIXX",  # X on {1,2,5,6}
    "XIXIXIX",  # X on {0,2,4,6}
    "IIIZZZZ",
    "IZZIIZZ",
    "ZIZIZIZ",
]

def encode7_ops():
    ops = [cc.h(q) for q in (4, 5, 6)]
    ops += [cc.cnot(0, 1), cc.cnot(0, 2)]
    ops += [cc.cnot(6, 0), cc.cnot(6, 1), cc.cnot(6, 3)]
    ops += [cc.cnot(5, 0), cc.cnot(5, 2), cc.cnot(5, 3)]
    ops += [cc.cnot(4, 1), cc.cnot(4, 2), cc.cnot(4, 3)]
    return ops

circ7 = cc.Circuit(7, 0, tuple(encode7_ops()))
phi0, _ = cc.execute(circ7, rng)
print("[[7,1,3]] generator eigenvalues:", [f"{eig_check(phi0, g).real:+.4f}" for g in GEN7])
print("Z_L eigenvalue:", eig_check(phi0, "ZZZZZZZ"))

phi1 = apply_pauli_string(phi0, "XXXXXXX")
plus7 = phi0.copy()
plus7.amps = (phi0.amps + phi1.amps) / np.sqrt(2)
h7 = phi0.copy()
for q in range(7):
    sv.apply_1q(h7, cc.GATE_MATRICES["H"], q)
print("|<+L|H^7|0L>|^2 =", abs(sv.overlap(plus7, h7)) ** 2)
h7p = plus7.copy()
for q in range(7):
    sv.apply_1q(h7p, cc.GATE_MATRICES["H"], q)
print("|<0L|H^7|+L>|^2 =", abs(sv.overlap(phi0, h7p)) ** 2)
