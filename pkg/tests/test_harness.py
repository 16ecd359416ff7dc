import math

import numpy as np
import pytest

from coherentsim import harness as hn
from coherentsim.noise import binary_entropy, pbf_pauli, pbf_vmf


def test_config_defaults_and_grid_fill():
    cfg = hn.ExperimentConfig(kind="qec_sweep")
    assert len(cfg.grid) == 7
    assert cfg.grid[0] == pytest.approx(1e-6 / 3)
    assert cfg.grid[-1] == pytest.approx(1e-1 / 3)
    ent = hn.ExperimentConfig(kind="entropy_table")
    assert len(ent.grid) == 50
    assert hn.ExperimentConfig(kind="qec_sweep", noise_model="pauli").models == ("pauli",)
    assert hn.ExperimentConfig(kind="qec_sweep").models == ("continuous", "pauli")


def test_config_validation():
    with pytest.raises(hn.ConfigError):
        hn.ExperimentConfig(kind="bogus")
    with pytest.raises(hn.ConfigError):
        hn.ExperimentConfig(kind="qec_sweep", noise_model="quantum")
    with pytest.raises(hn.ConfigError):
        hn.ExperimentConfig(kind="qec_sweep", n_instances=0)
    with pytest.raises(hn.ConfigError):
        hn.ExperimentConfig(kind="qec_sweep", grid=(0.9,))
    with pytest.raises(hn.ConfigError):
        hn.ExperimentConfig(kind="qec_sweep", grid=(-0.1,))


def test_instance_rng_reproducible_and_distinct():
    a = hn.instance_rng(7, "qec_sweep", 1, 2, 3).random(4)
    b = hn.instance_rng(7, "qec_sweep", 1, 2, 3).random(4)
    c = hn.instance_rng(7, "qec_sweep", 1, 3, 3).random(4)
    d = hn.instance_rng(8, "qec_sweep", 1, 2, 3).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_entropy_table_monotone_and_matched():
    cfg = hn.ExperimentConfig(kind="entropy_table", grid=hn.default_pauli_grid(20))
    records = hn.run_entropy_table(cfg)
    ents = [r.entropy for r in records]
    assert all(a < b for a, b in zip(ents, ents[1:]))
    for r in records:
        assert abs(binary_entropy(pbf_pauli(r.p)) - binary_entropy(pbf_vmf(r.kappa))) < 1e-10
        assert r.sigma == pytest.approx(r.kappa**-0.5)
        assert r.p_bf == pytest.approx(2 * r.p / 3)


def test_entropy_table_boundary_approaches_unit_entropy():
    cfg = hn.ExperimentConfig(kind="entropy_table", grid=(0.75 - 1e-7,))
    (rec,) = hn.run_entropy_table(cfg)
    assert rec.entropy == pytest.approx(1.0, abs=1e-10)


def test_qec_sweep_noiseless_grid_point():
    cfg = hn.ExperimentConfig(
        kind="qec_sweep",
        grid=(0.0,),
        code="513",
        m_list=(0, 2),
        ec_list=(0, 1),
        n_instances=3,
    )
    for r in hn.run_qec_sweep(cfg):
        assert r.p_err < 1e-10
        assert r.sigma == 0.0 and r.entropy == 0.0


def test_qec_sweep_record_fields_and_sorting():
    cfg = hn.ExperimentConfig(
        kind="qec_sweep",
        grid=(1e-3, 1e-4),
        code="513",
        m_list=(2,),
        ec_list=(0,),
        noise_model="continuous",
        n_instances=5,
        master_seed=1,
    )
    records = hn.run_qec_sweep(cfg)
    assert [r.p for r in records] == sorted(r.p for r in records)
    for r in records:
        assert r.kind == "qec_sweep"
        assert r.model == "continuous"
        assert 0.0 <= r.p_err <= 1.0
        assert r.stderr >= 0.0
        assert r.n_instances == 5
        assert r.kappa > 0 and r.sigma == pytest.approx(r.kappa**-0.5)


def test_grover_sweep_noiseless_point_hits_algorithmic_floor():
    cfg = hn.ExperimentConfig(
        kind="grover_sweep",
        grid=(0.0,),
        n_list=(3, 5),
        iterations="optimal",
        n_instances=2,
        noise_model="continuous",
    )
    for r in hn.run_grover_sweep(cfg):
        assert r.gsa_err < 2.0**-r.N + 1e-10


def test_grover_sweep_scrambled_limit():
    cfg = hn.ExperimentConfig(
        kind="grover_sweep",
        grid=(0.74,),
        n_list=(3,),
        iterations="optimal",
        n_instances=60,
        noise_model="continuous",
        master_seed=5,
    )
    (rec,) = hn.run_grover_sweep(cfg)
    assert abs(rec.gsa_err - (1.0 - 2.0**-3)) < 0.1


def test_grover_sweep_shots_metric_runs():
    cfg = hn.ExperimentConfig(
        kind="grover_sweep",
        grid=(1e-3,),
        n_list=(3,),
        iterations="optimal",
        n_instances=4,
        metric_mode="shots",
        n_shots=50,
        noise_model="pauli",
    )
    for r in hn.run_grover_sweep(cfg):
        assert 0.0 <= r.gsa_err <= 1.0


def test_heatmap_zero_sigma_all_undefined():
    cfg = hn.ExperimentConfig(
        kind="clifford_heatmap",
        h_grid=(5,),
        cnot_grid=(5,),
        circuits_per_cell=4,
        sigma=0.0,
        n_qubits=3,
    )
    (rec,) = hn.run_clifford_heatmap(cfg)
    assert rec.n_valid == 0
    assert rec.n_undefined == 4
    assert math.isnan(rec.mean_ratio)


def test_heatmap_mini_run_produces_finite_ratios():
    cfg = hn.ExperimentConfig(
        kind="clifford_heatmap",
        h_grid=(10, 20),
        cnot_grid=(10,),
        circuits_per_cell=6,
        sigma=0.05,
        n_qubits=4,
        master_seed=2,
    )
    records = hn.run_clifford_heatmap(cfg)
    assert len(records) == 2
    for r in records:
        assert r.n_valid == 6
        assert math.isfinite(r.mean_ratio) and r.mean_ratio > 0
        assert math.isfinite(r.var_ratio)


def test_write_csv_empty_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    hn.write_csv([], str(path), kind="qec_sweep")
    lines = path.read_text().strip().splitlines()
    assert lines == [",".join(hn.CSV_COLUMNS["qec_sweep"])]
    with pytest.raises(hn.ConfigError):
        hn.write_csv([], str(tmp_path / "x.csv"))


def test_csv_round_trip(tmp_path):
    cfg = hn.ExperimentConfig(kind="entropy_table", grid=hn.default_pauli_grid(5))
    records = hn.run_entropy_table(cfg)
    path = tmp_path / "table.csv"
    hn.write_csv(records, str(path))
    back = hn.read_csv(str(path))
    assert len(back) == len(records)
    for a, b in zip(records, back):
        assert a.p == b.p and a.kappa == b.kappa and a.entropy == b.entropy


def test_csv_rejects_unwritable_path():
    records = hn.run_entropy_table(
        hn.ExperimentConfig(kind="entropy_table", grid=(1e-3,))
    )
    with pytest.raises(OSError):
        hn.write_csv(records, "/nonexistent-dir/out.csv")


def test_byte_identical_reruns(tmp_path):
    def run(path):
        cfg = hn.ExperimentConfig(
            kind="qec_sweep",
            grid=(1e-3,),
            code="513",
            m_list=(1,),
            ec_list=(0, 1),
            n_instances=8,
            master_seed=11,
            out=str(path),
        )
        hn.run_experiment(cfg)
        return path.read_bytes()

    assert run(tmp_path / "a.csv") == run(tmp_path / "b.csv")


def test_aggregation_matches_pooled_shots():
    # mean of equal-sized per-instance outcome fractions equals the pooled
    # fraction over all shots
    rng = np.random.default_rng(3)
    n_shots = 64
    fractions = []
    bad_total = 0
    for _ in range(10):
        bad = int(rng.integers(0, n_shots + 1))
        bad_total += bad
        fractions.append(bad / n_shots)
    assert np.mean(fractions) == pytest.approx(bad_total / (10 * n_shots), rel=1e-12)


def test_config_file_round_trip(tmp_path):
    text = """
# sweep settings
kind = qec_sweep
noise_model = continuous
grid = 0.001, 0.01
code = 713
m_list = 1, 2
ec_list = 0
n_instances = 4
master_seed = 9
out = run.csv
"""
    path = tmp_path / "sweep.cfg"
    path.write_text(text)
    cfg = hn.load_config(str(path))
    assert cfg.kind == "qec_sweep"
    assert cfg.code == "713"
    assert cfg.grid == (0.001, 0.01)
    assert cfg.m_list == (1, 2)
    assert cfg.master_seed == 9
    assert cfg.out == "run.csv"


def test_config_file_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("kind = qec_sweep\nwibble = 3\n")
    with pytest.raises(hn.ConfigError):
        hn.load_config(str(path))
    path.write_text("noise_model = pauli\n")
    with pytest.raises(hn.ConfigError):
        hn.load_config(str(path))
    path.write_text("kind qec_sweep\n")
    with pytest.raises(hn.ConfigError):
        hn.load_config(str(path))


def test_override_config():
    cfg = hn.ExperimentConfig(kind="grover_sweep")
    out = hn.override_config(cfg, master_seed=4, n_instances=None)
    assert out.master_seed == 4
    assert out.n_instances == cfg.n_instances
