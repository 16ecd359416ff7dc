import math

import numpy as np
import pytest
from scipy import stats

from coherentsim import circuits as cc
from coherentsim import propagation as prop
from coherentsim.noise import NoiseSpec
from coherentsim.statevector import infidelity, init_basis


def test_hadamard_chain_tracks_exact():
    sigma = 0.1
    for m in (1, 5, 20):
        circ = cc.Circuit(1, 0, tuple(cc.h(0) for _ in range(m)))
        r = prop.propagate_variances(circ, sigma)
        assert r.tracks[0].var_theta == pytest.approx(m * sigma**2, rel=1e-12)
        assert r.tracks[0].var_phi == pytest.approx(m * sigma**2, rel=1e-12)


def test_cnot_only_circuit_gives_zero_tracks():
    ops = tuple(cc.cnot(i % 3, (i + 1) % 3) for i in range(10))
    r = prop.propagate_variances(cc.Circuit(3, 0, ops), 0.2)
    assert all(t.var_theta == 0.0 and t.var_phi == 0.0 for t in r.tracks)


def test_interleaved_h_cnot_tracks():
    circ = cc.Circuit(2, 0, (cc.h(0), cc.cnot(0, 1), cc.h(1)))
    r = prop.propagate_variances(circ, 0.1)
    for t in r.tracks:
        assert t.var_theta == pytest.approx(0.01)
        assert t.var_phi == pytest.approx(0.01)


def test_swap_exchanges_tracks():
    circ = cc.Circuit(2, 0, (cc.h(0), cc.h(0), cc.swap(0, 1)))
    r = prop.propagate_variances(circ, 0.1)
    assert r.tracks[0].var_theta == 0.0
    assert r.tracks[1].var_theta == pytest.approx(0.02)


def test_pauli_gates_leave_tracks_unchanged():
    circ = cc.Circuit(1, 0, (cc.h(0), cc.x(0), cc.z(0), cc.y(0), cc.s(0)))
    r = prop.propagate_variances(circ, 0.1)
    assert r.tracks[0].var_theta == pytest.approx(0.01)


def test_injected_noise_ops_rejected():
    circ = cc.Circuit(1, 0, (cc.h(0),))
    noisy = cc.inject_noise(circ, NoiseSpec.gaussian(0.1), np.random.default_rng(0))
    with pytest.raises(prop.PropagationError):
        prop.propagate_variances(noisy, 0.1)
    with pytest.raises(prop.PropagationError):
        prop.propagate_variances(cc.Circuit(1, 0, (cc.pauli(0, "X"),)), 0.1)


def test_variance_additivity_under_composition():
    # propagating A then B from A's end state equals propagating A+B; the
    # reference composition replays B's rules from arbitrary start tracks
    rng = np.random.default_rng(1)

    def random_block(n, n_ops, seed):
        gen = np.random.default_rng(seed)
        ops = []
        for _ in range(n_ops):
            r = gen.random()
            if r < 0.5:
                ops.append(cc.h(int(gen.integers(n))))
            elif r < 0.8:
                a, b = gen.permutation(n)[:2]
                ops.append(cc.cnot(int(a), int(b)))
            else:
                a, b = gen.permutation(n)[:2]
                ops.append(cc.swap(int(a), int(b)))
        return cc.Circuit(n, 0, tuple(ops))

    def replay(start, circuit, s2):
        var = [list(t) for t in start]
        for op in circuit.ops:
            if op.kind == "H":
                q = op.qubits[0]
                var[q] = [var[q][1] + s2, var[q][0] + s2]
            elif op.kind == "SWAP":
                a, b = op.qubits
                var[a], var[b] = var[b], var[a]
        return var

    sigma = 0.07
    for seed in range(5):
        a = random_block(3, 20, seed)
        b = random_block(3, 20, seed + 100)
        whole = cc.Circuit(3, 0, a.ops + b.ops)
        tracks_a = [
            (t.var_theta, t.var_phi)
            for t in prop.propagate_variances(a, sigma).tracks
        ]
        composed = replay(tracks_a, b, sigma**2)
        direct = prop.propagate_variances(whole, sigma).tracks
        for q in range(3):
            assert direct[q].var_theta == composed[q][0]
            assert direct[q].var_phi == composed[q][1]


def test_permutation_equivariance():
    ops = (cc.h(0), cc.h(0), cc.cnot(0, 1), cc.h(2))
    relabel = {0: 2, 1: 0, 2: 1}
    permuted = tuple(
        cc.GateOp(op.kind, tuple(relabel[q] for q in op.qubits)) for op in ops
    )
    r1 = prop.propagate_variances(cc.Circuit(3, 0, ops), 0.1)
    r2 = prop.propagate_variances(cc.Circuit(3, 0, permuted), 0.1)
    for q in range(3):
        assert r1.tracks[q] == r2.tracks[relabel[q]]


def test_jacobian_empty_circuit_identity():
    m = prop.jacobian(cc.Circuit(3, 0, ()))
    np.testing.assert_array_equal(m, np.eye(6))


def test_jacobian_single_h_zero_prior_is_pure_swap():
    m = prop.jacobian(cc.Circuit(2, 0, (cc.h(0),)))
    expect = np.eye(4)
    expect[[0, 2]] = expect[[2, 0]]
    np.testing.assert_array_equal(m, expect)


def test_jacobian_factors_are_swaps_and_positive_scalings():
    circ = cc.Circuit(3, 0, (cc.h(0), cc.h(0), cc.swap(0, 1), cc.h(1), cc.cnot(1, 2)))
    m = prop.jacobian(circ)
    for row in m:
        nonzero = row[np.abs(row) > 0]
        assert len(nonzero) == 1
        assert nonzero[0] > 0


def test_jacobian_moments_match_tracks():
    circ = cc.Circuit(
        3, 0, (cc.h(0), cc.h(0), cc.h(1), cc.swap(0, 2), cc.h(2), cc.h(2), cc.h(1), cc.h(0))
    )
    sigma = 0.05
    m = prop.jacobian(circ)
    r = prop.propagate_variances(circ, sigma)
    rng = np.random.default_rng(2)
    n = 100_000
    z = rng.normal(0.0, sigma, size=(n, 6))
    final = z @ m.T
    emp = final.var(axis=0)
    tracked = [t.var_theta for t in r.tracks] + [t.var_phi for t in r.tracks]
    # zero-track components carry the prior through unchanged (identity rows)
    # and are outside the correspondence
    compared = 0
    for e, v in zip(emp, tracked):
        if v == 0.0:
            continue
        compared += 1
        se = math.sqrt(2.0 / n) * v
        assert abs(e - v) < 3 * se
    assert compared >= 5


def test_propagate_with_jacobian_attaches_matrix():
    circ = cc.Circuit(2, 0, (cc.h(0),))
    r = prop.propagate_variances(circ, 0.1, with_jacobian=True)
    assert r.jacobian is not None and r.jacobian.shape == (4, 4)
    assert prop.propagate_variances(circ, 0.1).jacobian is None


def test_sample_terminal_errors_zero_tracks():
    r = prop.PropagationResult(
        tracks=(prop.QubitErrorTrack(0.0, 0.0), prop.QubitErrorTrack(0.0, 0.0))
    )
    for a in prop.sample_terminal_errors(r, np.random.default_rng(3)):
        assert a.theta == 0.0 and a.phi == 0.0


def test_sample_terminal_errors_moments():
    r = prop.PropagationResult(tracks=(prop.QubitErrorTrack(0.04, 0.01),))
    rng = np.random.default_rng(4)
    n = 100_000
    draws = np.array(
        [(a.theta, a.phi) for a in (prop.sample_terminal_errors(r, rng)[0] for _ in range(n))]
    )
    for col, var in ((0, 0.04), (1, 0.01)):
        se = math.sqrt(2.0 / n) * var
        assert abs(draws[:, col].var() - var) < 3 * se
    # independence across components
    corr = np.mean(draws[:, 0] * draws[:, 1]) / math.sqrt(0.04 * 0.01)
    assert abs(corr) < 3 / math.sqrt(n)


def test_terminal_samples_gaussian_distribution():
    # KS test at 1% significance against the tracked normal law
    r = prop.PropagationResult(tracks=(prop.QubitErrorTrack(0.02, 0.02),))
    rng = np.random.default_rng(5)
    thetas = np.array([prop.sample_terminal_errors(r, rng)[0].theta for _ in range(5000)])
    _, p_value = stats.kstest(thetas / math.sqrt(0.02), "norm")
    assert p_value > 0.01


def test_build_approx_circuit_zero_variance_identity():
    core = cc.Circuit(2, 0, (cc.h(0), cc.cnot(0, 1)))
    tail = cc.Circuit(2, 0, (cc.h(1),))
    r = prop.PropagationResult(
        tracks=(prop.QubitErrorTrack(0.0, 0.0), prop.QubitErrorTrack(0.0, 0.0))
    )
    approx = prop.build_approx_circuit(core, tail, r, np.random.default_rng(6))
    assert approx.count_kind("ERROR_ROTATION") == 2
    s1, _ = cc.execute(approx, np.random.default_rng(0))
    s2, _ = cc.execute(core.concat(tail), np.random.default_rng(0))
    np.testing.assert_allclose(s1.amps, s2.amps, atol=1e-12)


def test_build_approx_circuit_insertion_point():
    core = cc.Circuit(3, 0, (cc.h(0),))
    tail = cc.Circuit(3, 0, (cc.h(1),))
    r = prop.propagate_variances(core, 0.1)
    approx = prop.build_approx_circuit(core, tail, r, np.random.default_rng(7))
    kinds = [op.kind for op in approx.ops]
    assert kinds == ["H", "ERROR_ROTATION", "ERROR_ROTATION", "ERROR_ROTATION", "H"]
    # reduced-form phases
    for op in approx.ops[1:4]:
        assert op.params[1] == op.params[2]


def test_build_approx_circuit_register_mismatch():
    core = cc.Circuit(2, 0, ())
    tail = cc.Circuit(3, 0, ())
    r = prop.propagate_variances(core, 0.1)
    with pytest.raises(prop.PropagationError):
        prop.build_approx_circuit(core, tail, r, np.random.default_rng(0))
    with pytest.raises(prop.PropagationError):
        bad = prop.PropagationResult(tracks=(prop.QubitErrorTrack(0.0, 0.0),))
        prop.build_approx_circuit(core, core, bad, np.random.default_rng(0))


def test_full_model_consistency_single_qubit_chain():
    # bare chain of m Hadamards: per-gate injection vs terminal sampling give
    # the same mean infidelity to the ideal state within 3 combined SEs
    sigma, m, n_inst = 0.05, 20, 2000
    circ = cc.Circuit(1, 0, tuple(cc.h(0) for _ in range(m)))
    ideal, _ = cc.execute(circ, np.random.default_rng(0))
    result = prop.propagate_variances(circ, sigma)
    empty = cc.Circuit(1, 0, ())
    rng = np.random.default_rng(8)

    full = np.empty(n_inst)
    approx = np.empty(n_inst)
    for i in range(n_inst):
        noisy = cc.inject_noise(circ, NoiseSpec.gaussian(sigma), rng)
        state, _ = cc.execute(noisy, rng)
        full[i] = infidelity(state, ideal)
        approx_circ = prop.build_approx_circuit(circ, empty, result, rng)
        state, _ = cc.execute(approx_circ, rng)
        approx[i] = infidelity(state, ideal)

    se = math.hypot(full.std(ddof=1), approx.std(ddof=1)) / math.sqrt(n_inst)
    assert abs(full.mean() - approx.mean()) < 3 * se


def test_tracks_text_format():
    circ = cc.Circuit(2, 0, (cc.h(0),))
    r = prop.propagate_variances(circ, 0.1)
    lines = prop.tracks_text(r).strip().splitlines()
    assert len(lines) == 2
    q, vt, vp = lines[0].split()
    assert q == "0" and float(vt) == pytest.approx(0.01)
