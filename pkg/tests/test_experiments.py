"""Sweep runner: config handling, determinism, CSV shape, analysis reports."""

import numpy as np
import pytest

from kmix.experiments import (
    CSV_COLUMNS,
    DELTA_TS_DEFAULT,
    DELTA_TS_MCPS,
    STEPS_DEFAULT,
    ExperimentConfig,
    RunRecord,
    census_report,
    error_scan_report,
    rows_to_csv,
    run_experiments,
    run_to_csv,
    tsp_check_report,
)


def strip_runtime(csv_text: str) -> list[str]:
    lines = csv_text.strip().split("\n")
    drop = lines[0].split(",").index("runtime_ms")
    out = []
    for line in lines:
        cells = line.split(",")
        out.append(",".join(c for i, c in enumerate(cells) if i != drop))
    return out


def test_config_defaults():
    c = ExperimentConfig("mcps")
    assert c.delta_ts == DELTA_TS_MCPS
    assert c.sizes == tuple(range(5, 15))
    assert c.steps == STEPS_DEFAULT
    assert c.mixers == ("xy", "x")
    p = ExperimentConfig("portfolio")
    assert p.delta_ts == DELTA_TS_DEFAULT
    assert p.sizes == tuple(range(5, 11))
    assert ExperimentConfig("mcfp").sizes == tuple(range(4, 17))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("tsp")
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", mixers=("xz",))
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", mixers=())
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", mode="approximate")
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", delta_ts=(0.1, 0.0))
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", steps=(5, 0))
    with pytest.raises(ValueError):
        ExperimentConfig("mcps", instances=0)


def test_config_roundtrip():
    c = ExperimentConfig(
        "portfolio", sizes=(5,), instances=2, delta_ts=(0.3,), steps=(5, 10),
        portfolio_scale=0.5,
    )
    assert ExperimentConfig.from_dict(c.to_dict()) == c
    with pytest.raises(ValueError, match="unknown"):
        ExperimentConfig.from_dict({"problem": "mcps", "shots": 100})
    filled = ExperimentConfig.from_dict({"problem": "mcps", "sizes": None})
    assert filled.sizes == tuple(range(5, 15))


def test_minimal_run():
    config = ExperimentConfig(
        "portfolio", sizes=(5,), instances=1, delta_ts=(0.3,), steps=(5,)
    )
    rows = run_experiments(config)
    assert len(rows) == 2  # one per mixer
    by_mixer = {r.mixer: r for r in rows}
    assert set(by_mixer) == {"xy", "x"}
    for r in rows:
        assert r.status == "ok"
        assert r.n == 5
        assert r.instance_seed == 1
        assert 0.0 <= r.p_opt <= 1.0
        assert 0.0 <= r.leakage <= 1.0
        assert r.n_optima >= 1
        assert r.optimal_value is not None
    assert by_mixer["xy"].leakage < 1e-9
    # both mixers score the same instance, so the target value agrees
    assert by_mixer["xy"].optimal_value == pytest.approx(by_mixer["x"].optimal_value)


def test_row_count_and_sort_order():
    config = ExperimentConfig(
        "portfolio", sizes=(4, 5), instances=2, delta_ts=(0.5, 0.3), steps=(10, 5)
    )
    rows = run_experiments(config)
    assert len(rows) == 2 * 2 * 2 * 2 * 2
    keys = [r.sort_key() for r in rows]
    assert keys == sorted(keys)
    assert all(r.status == "ok" for r in rows)
    # delta_ts were given unsorted; canonical order sorts them inside each group
    assert [r.delta_t for r in rows[:4]] == [0.3, 0.3, 0.5, 0.5]


def test_csv_determinism_and_shape():
    config = ExperimentConfig(
        "mcps", sizes=(6,), instances=2, delta_ts=(0.25,), steps=(5, 10)
    )
    first, failed_a = run_to_csv(config)
    second, failed_b = run_to_csv(config)
    assert failed_a == failed_b == 0
    assert strip_runtime(first) == strip_runtime(second)
    lines = first.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 2 * 2
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == len(CSV_COLUMNS)
        assert cells[0] == "1"  # schema_version
        assert cells[-1] == "ok"


def test_cap_skips_rows():
    config = ExperimentConfig(
        "portfolio", sizes=(5,), instances=1, delta_ts=(0.3,), steps=(5, 10),
        state_qubit_cap=3,
    )
    rows = run_experiments(config)
    assert len(rows) == 2 * 2
    for r in rows:
        assert r.status == "skipped:state-too-large:5-qubits"
        assert r.p_opt is None and r.leakage is None
    text = rows_to_csv(rows)
    line = text.strip().split("\n")[1]
    assert ",,," in line  # empty metric cells survive in the CSV


def test_worker_pool_matches_serial(monkeypatch):
    config = ExperimentConfig(
        "portfolio", sizes=(4,), instances=2, delta_ts=(0.3,), steps=(5, 10)
    )
    serial = rows_to_csv(run_experiments(config))
    monkeypatch.setenv("KMIX_WORKERS", "2")
    parallel = rows_to_csv(run_experiments(config))
    assert strip_runtime(serial) == strip_runtime(parallel)


def test_census_report():
    rep = census_report("xy-full", 6)
    assert rep["non_commuting_pairs"] == 60
    assert rep["groups"] == 15
    assert rep["norms_available"] is True
    assert rep["total_commutator_norm"] > 0
    big = census_report("xy-ring", 13, k=2)
    assert big["norms_available"] is False
    assert big["total_commutator_norm"] is None
    blocked = census_report("xy-blocked", 4, blocks=["2:1", "2:1"])
    assert blocked["groups"] == 2
    assert blocked["non_commuting_pairs"] == 0
    with pytest.raises(ValueError, match="cover"):
        census_report("xy-blocked", 5, blocks=["2:1", "2:1"])


def test_error_scan_report():
    rep = error_scan_report("xy-full", 4, k=1)
    assert len(rep["rows"]) == 5
    for row in rep["rows"]:
        assert row["empirical"] <= row["bound"] + 1e-15
    assert 1.8 <= rep["exponent"] <= 2.2
    assert 1.8 <= error_scan_report("xy-full", 5, k=2)["exponent"] <= 2.2
    flat = error_scan_report("x", 4)
    assert flat["exponent"] is None
    assert all(r["empirical"] < 1e-12 for r in flat["rows"])


def test_tsp_check_report():
    rep = tsp_check_report(3, steps=20, beta=0.1)
    assert rep["commutation_norm"] < 1e-10
    assert rep["leakage"] < 1e-9
    with pytest.raises(ValueError):
        tsp_check_report(4)


def test_rows_to_csv_float_repr_roundtrip():
    row = RunRecord(
        "portfolio", 5, 1, "xy", "trotterized", 0.1, 5,
        0.12345678901234567, 1.1e-16, -0.25, 2, 3.14159, "ok",
    )
    text = rows_to_csv([row])
    cells = text.strip().split("\n")[1].split(",")
    # repr-format floats parse back to the exact same doubles
    assert float(cells[CSV_COLUMNS.index("p_opt")]) == row.p_opt
    assert float(cells[CSV_COLUMNS.index("leakage")]) == row.leakage
    assert float(cells[CSV_COLUMNS.index("optimal_value")]) == row.optimal_value
    assert cells[CSV_COLUMNS.index("runtime_ms")] == "3.142"
