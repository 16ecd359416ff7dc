"""Dev probe: margins for the qualitative acceptance criteria at reduced scale."""
import math
import time

import numpy as np

from coherentsim import harness as hn

t0 = time.time()

grid = hn.default_pauli_grid(7)
print("grid p:", [f"{p:.3e}" for p in grid])
print("grid sigma:", [f"{hn._match_point(p).sigma:.4f}" for p in grid])

# --- criterion 4: m=10, ec in {0,1}, three largest points, continuous vs pauli
cfg4 = hn.ExperimentConfig(
    kind="qec_sweep", grid=grid[4:], code="513", m_list=(10,), ec_list=(0, 1),
    n_instances=400, master_seed=101,
)
recs4 = hn.run_qec_sweep(cfg4)
print("\n-- criterion 4 (m=10, cont vs pauli, 3 largest points)")
for p in sorted({r.p for r in recs4}):
    for ec in (0, 1):
        cont = next(r for r in recs4 if r.p == p and r.ec == ec and r.model == "continuous")
        pau = next(r for r in recs4 if r.p == p and r.ec == ec and r.model == "pauli")
        gap = cont.p_err - pau.p_err
        se = math.hypot(cont.stderr, pau.stderr)
        print(f"  p={p:.2e} ec={ec}: cont={cont.p_err:.4f} pauli={pau.p_err:.4f} gap={gap:.4f} ({gap/max(se,1e-12):.1f} se)")

# --- criterion 5: m=50 continuous, ec ordering at mid grid (indices 2,3,4)
cfg5 = hn.ExperimentConfig(
    kind="qec_sweep", grid=grid[2:5], code="513", m_list=(50,), ec_list=(0, 1),
    noise_model="continuous", n_instances=400, master_seed=102,
)
recs5 = hn.run_qec_sweep(cfg5)
print("\n-- criterion 5 (m=50 continuous, ec=1 < ec=0 at mid grid)")
for p in sorted({r.p for r in recs5}):
    e0 = next(r for r in recs5 if r.p == p and r.ec == 0)
    e1 = next(r for r in recs5 if r.p == p and r.ec == 1)
    gap = e0.p_err - e1.p_err
    se = math.hypot(e0.stderr, e1.stderr)
    print(f"  p={p:.2e}: ec0={e0.p_err:.4f} ec1={e1.p_err:.4f} gap={gap:.4f} ({gap/max(se,1e-12):.1f} se)")

print(f"[{time.time()-t0:.0f}s]")

# --- criterion 6: grover N in {3,5}, pauli vs continuous at mid, crossover
cfg6 = hn.ExperimentConfig(
    kind="grover_sweep", grid=grid, n_list=(3, 5), iterations="optimal",
    n_instances=300, master_seed=103,
)
recs6 = hn.run_grover_sweep(cfg6)
print("\n-- criterion 6 (grover)")
for p in sorted({r.p for r in recs6}):
    row = {}
    for N in (3, 5):
        for model in ("continuous", "pauli"):
            r = next(x for x in recs6 if x.p == p and x.N == N and x.model == model)
            row[(N, model)] = (r.gsa_err, r.stderr)
    print(
        f"  p={p:.2e}: N3 cont={row[(3,'continuous')][0]:.4f} pauli={row[(3,'pauli')][0]:.4f} | "
        f"N5 cont={row[(5,'continuous')][0]:.4f} pauli={row[(5,'pauli')][0]:.4f}"
    )
mid = grid[3]
for N in (3, 5):
    c = next(x for x in recs6 if x.p == mid and x.N == N and x.model == "continuous")
    pa = next(x for x in recs6 if x.p == mid and x.N == N and x.model == "pauli")
    gap = pa.gsa_err - c.gsa_err
    se = math.hypot(c.stderr, pa.stderr)
    print(f"  mid point N={N}: pauli-cont gap={gap:.4f} ({gap/max(se,1e-12):.1f} se)")

print(f"[{time.time()-t0:.0f}s]")

# --- criterion 9: approximation deviation, ec=1 m=100 vs ec=0 m=10 at sigma mid-grid
from coherentsim import circuits as cc, propagation as prop, qec
from coherentsim.noise import NoiseSpec
from coherentsim.statevector import init_basis

sigma_mid = hn._match_point(grid[3]).sigma
print("\n-- criterion 9 (sigma =", f"{sigma_mid:.4f})")
n_inst = 400
for (m, ec) in ((10, 0), (100, 1)):
    spec = qec.CodeExperimentSpec("513", m, ec)
    core, tail = qec.build_code_blocks(spec)
    circ = core.concat(tail)
    result = prop.propagate_variances(core, sigma_mid)
    # snapshot of the noiseless core for the approximation path
    core_state, _ = cc.execute(core, np.random.default_rng(0))
    full_total = approx_total = 0.0
    for i in range(n_inst):
        rng = hn.instance_rng(104, "qec_sweep", 0, i, m * 10 + ec)
        noisy = cc.inject_noise(circ, NoiseSpec.gaussian(sigma_mid), rng)
        state, _ = cc.execute(noisy, rng)
        full_total += qec.p_err(state, spec)
        angles = prop.sample_terminal_errors(result, rng)
        st = core_state.copy()
        err_ops = tuple(cc.error_rotation(q, a.theta, a.phi, a.phi) for q, a in enumerate(angles))
        clbits = [0] * core.n_clbits
        cc.execute_ops(st, err_ops + tail.ops, clbits, rng)
        approx_total += qec.p_err(st, spec)
    pf, pa = full_total / n_inst, approx_total / n_inst
    print(f"  m={m} ec={ec}: full={pf:.4f} approx={pa:.4f} |dev|={abs(pa-pf):.4f}")

print(f"[{time.time()-t0:.0f}s]")

# --- criterion 8: heatmap band
cfg8 = hn.ExperimentConfig(
    kind="clifford_heatmap", h_grid=(10, 40, 70, 100), cnot_grid=(10, 40, 70, 100),
    circuits_per_cell=20, sigma=0.05, n_qubits=5, master_seed=105,
)
recs8 = hn.run_clifford_heatmap(cfg8)
print("\n-- criterion 8 (heatmap cell means)")
for r in recs8:
    print(f"  h={r.n_h:3d} cnot={r.n_cnot:3d}: mean={r.mean_ratio:.3f} var={r.var_ratio:.3f} valid={r.n_valid}")
print(f"[{time.time()-t0:.0f}s total]")
