import json

import numpy as np
import pytest

from tsabm.analytics import msd_nts, msd_ys
from tsabm.analytics.msd import MsdCurve
from tsabm.errors import GridError, ParseError, ShapeError
from tsabm.paths import ModelParams, TimeGrid, TrajectoryEnsemble, simulate_ensemble
from tsabm.pipeline import (
    NTS,
    SUBDIFFUSIVE,
    UNDETERMINED,
    CalibrationConfig,
    SelectionRule,
    emit_report,
    ingest_csv,
    load_report,
    run_calibration,
    select_model,
    write_ensemble_csv,
)


@pytest.fixture
def nts_ensemble():
    return simulate_ensemble("nts", ModelParams(0.26, 6.0, 0.11), TimeGrid(np.arange(851.0)), 3, 5)


def test_csv_round_trip(tmp_path, nts_ensemble):
    f = tmp_path / "paths.csv"
    write_ensemble_csv(nts_ensemble, f)
    e = ingest_csv(f)
    assert e.n_paths == 3 and len(e.shared_grid) == 851
    assert e.labels == ["traj_0", "traj_1", "traj_2"]
    np.testing.assert_array_equal(e.values, nts_ensemble.values)


def test_single_column_file(tmp_path):
    f = tmp_path / "one.csv"
    f.write_text("t,x\n0,1\n1,2\n2,2\n")
    e = ingest_csv(f)
    assert e.n_paths == 1 and e.labels == ["x"]


@pytest.mark.parametrize("text,err,match", [
    ("t,a\n0,1\n1,2\n1,3\n", GridError, "row 4"),
    ("t,a\n0,1\n1\n", ShapeError, "row 3"),
    ("t,a\n0,1\n1,\n", ParseError, "missing"),
    ("t,a\n0,1\n1,abc\n", ParseError, "non-numeric"),
    ("time,a\n0,1\n1,2\n", ParseError, "header"),
    ("t,a\n0,1\n", ParseError, "2 data rows"),
    ("", ParseError, "empty"),
])
def test_ingest_errors(tmp_path, text, err, match):
    f = tmp_path / "bad.csv"
    f.write_text(text)
    with pytest.raises(err, match=match):
        ingest_csv(f)


def test_selection_on_analytic_curves():
    t = np.arange(1.0, 851.0)
    p = ModelParams(0.26, 6.0, 0.11)
    sel, diag = select_model(MsdCurve(t, np.array([msd_nts(p, v) for v in t]), 100), SelectionRule())
    assert sel == NTS and diag["poly_log_residual"] < 1e-20
    p = ModelParams(0.4, 0.2, 0.0)
    tt = np.unique(np.round(np.geomspace(1, 850, 60)))
    sel, diag = select_model(MsdCurve(tt, np.array([msd_ys(p, v) for v in tt]), 100), SelectionRule())
    assert sel == SUBDIFFUSIVE and diag["power"]["p_small"] < 0.9


def test_constant_ensemble_is_undetermined():
    e = TrajectoryEnsemble(TimeGrid(np.arange(100.0)), np.ones((3, 100)), "observed")
    r = run_calibration(e)
    assert r.selected == UNDETERMINED and r.msd["zero_msd"]
    assert all(row["error"] == "no model selected" for row in r.rows)


def test_forced_model_estimates_every_trajectory(nts_ensemble):
    r = run_calibration(nts_ensemble, CalibrationConfig(model=NTS))
    assert len(r.rows) == 3
    assert all(0 < row["alpha_hat"] < 1 and row["error"] is None for row in r.rows)
    assert r.provenance["estimator"] == NTS and r.provenance["master_seed"] == 5


def test_failures_are_recorded_per_trajectory():
    rng = np.random.default_rng(0)
    vals = np.vstack([np.cumsum(rng.normal(size=200)), np.cumsum(rng.normal(size=200))])
    e = TrajectoryEnsemble(TimeGrid(np.arange(200.0)), vals, "observed")
    r = run_calibration(e, CalibrationConfig(model=SUBDIFFUSIVE))
    assert all(row["error"].startswith("NoConstantPeriods") for row in r.rows)


def test_report_files_are_deterministic_and_round_trip(tmp_path, nts_ensemble):
    r = run_calibration(nts_ensemble, CalibrationConfig(model=NTS))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    emit_report(r, "json", a)
    emit_report(run_calibration(nts_ensemble, CalibrationConfig(model=NTS)), "json", b)
    assert a.read_bytes() == b.read_bytes()
    back = load_report(a)
    assert back.as_dict() == json.loads(json.dumps(r.as_dict()))
    assert back.provenance["config"]["rule"]["margin"] == 1.5


def test_csv_report_shape(tmp_path, nts_ensemble):
    r = run_calibration(nts_ensemble, CalibrationConfig(model=NTS))
    f = tmp_path / "r.csv"
    emit_report(r, "csv", f)
    lines = f.read_text().splitlines()
    assert lines[0] == "trajectory,alpha_hat,lambda_hat,beta_hat,objective,error"
    assert len(lines) == 4


def test_unknown_model_and_format(tmp_path, nts_ensemble):
    with pytest.raises(ValueError):
        CalibrationConfig(model="levy")
    r = run_calibration(nts_ensemble, CalibrationConfig(model=NTS))
    with pytest.raises(ValueError):
        emit_report(r, "xml", tmp_path / "x")
