"""Trajectory CSV ingestion, calibration with MSD-based model selection, and report files."""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytics.msd import POLY, POWER, MsdCurve, empirical_msd, fit_msd, log_residual, regime_bounds
from .errors import FitError, GridError, NumericalError, ParseError, ShapeError, ValidationError
from .estimation import NtsConfig, TailConfig, estimate
from .paths import OBSERVED, TimeGrid, TrajectoryEnsemble

NTS = "nts"
SUBDIFFUSIVE = "subdiffusive"
UNDETERMINED = "undetermined"
TABLE_COLUMNS = ("trajectory", "alpha_hat", "lambda_hat", "beta_hat", "objective", "error")


def _cell(text: str, row: int, col: int) -> float:
    if text.strip() == "":
        raise ParseError(f"missing value at row {row}, column {col}")
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"non-numeric value {text!r} at row {row}, column {col}") from None


def ingest_csv(path) -> TrajectoryEnsemble:
    """Read ``t,traj_0,traj_1,...``: one time column followed by one column per trajectory.

    Row numbers in error messages count the header as row 1.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise ParseError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "t":
        raise ParseError("header must start with 't' followed by at least one trajectory column")
    body = rows[1:]
    if len(body) < 2:
        raise ParseError("need at least 2 data rows")
    data = np.empty((len(body), len(header)))
    for i, r in enumerate(body):
        if len(r) != len(header):
            raise ShapeError(f"row {i + 2} has {len(r)} fields, header has {len(header)}")
        data[i] = [_cell(c, i + 2, j + 1) for j, c in enumerate(r)]
    if not np.all(np.isfinite(data)):
        raise ParseError("values must be finite")
    bad = np.flatnonzero(np.diff(data[:, 0]) <= 0)
    if bad.size:
        raise GridError(f"t is not strictly increasing at row {bad[0] + 3}")
    t = data[:, 0]
    # the grid type measures time from a non-negative origin
    grid = TimeGrid(t - min(t[0], 0.0))
    return TrajectoryEnsemble(grid, data[:, 1:].T, OBSERVED, labels=header[1:])


def _fmt(v) -> str:
    return repr(float(v))


def write_ensemble_csv(ensemble: TrajectoryEnsemble, path) -> None:
    """Inverse of ``ingest_csv``; floats are written with ``repr`` so files are byte-stable."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *ensemble.labels])
        for k, t in enumerate(ensemble.shared_grid.points):
            w.writerow([_fmt(t), *(_fmt(v) for v in ensemble.values[:, k])])


@dataclass
class SelectionRule:
    """Pick the subdiffusive model when the small-lag MSD exponent is below ``max_small_slope``
    and the polynomial's log residual exceeds ``margin`` times the two-regime one; pick nts
    when the polynomial is within that margin; otherwise undetermined."""

    max_small_slope: float = 0.9
    margin: float = 1.5

    def describe(self) -> str:
        return (f"subdiffusive if p_small < {self.max_small_slope} and poly_res > {self.margin} * power_res; "
                f"nts if poly_res <= {self.margin} * power_res; otherwise undetermined")


@dataclass
class CalibrationConfig:
    model: str | None = None
    dt: float | None = None
    epsilon: float = 0.0
    rule: SelectionRule = field(default_factory=SelectionRule)
    nts: NtsConfig = field(default_factory=NtsConfig)
    tail: TailConfig = field(default_factory=TailConfig)

    def __post_init__(self):
        if self.model not in (None, NTS, SUBDIFFUSIVE):
            raise ValidationError(f"unknown model {self.model!r}")

    def echo(self) -> dict:
        return {"model": self.model, "dt": self.dt, "epsilon": self.epsilon,
                "rule": {"max_small_slope": self.rule.max_small_slope, "margin": self.rule.margin},
                "nts": {"n_z": self.nts.n_z, "z_max": self.nts.z_max,
                        "domain_fraction": self.nts.domain_fraction},
                "tail": {"tail_fraction": self.tail.tail_fraction, "min_tail": self.tail.min_tail,
                         "min_waiting": self.tail.min_waiting}}


@dataclass
class CalibrationReport:
    rows: list
    msd: dict
    selected: str
    rule: str
    provenance: dict

    def as_dict(self) -> dict:
        return {"selected_model": self.selected, "selection_rule": self.rule, "msd": self.msd,
                "estimates": self.rows, "provenance": self.provenance}

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationReport":
        return cls(d["estimates"], d["msd"], d["selected_model"], d["selection_rule"], d["provenance"])


def _finite(v):
    return float(v) if v is not None and math.isfinite(v) else None


def select_model(curve: MsdCurve, rule: SelectionRule) -> tuple[str, dict]:
    """Fit both MSD models and apply ``rule``; returns (selection, diagnostics)."""
    diag = {"n_paths": curve.n_paths}
    try:
        poly = fit_msd(curve, POLY)
        power = fit_msd(curve, POWER)
    except FitError as exc:
        diag["fit_error"] = str(exc)
        diag["zero_msd"] = not bool(np.any(curve.values > 0))
        return UNDETERMINED, diag
    lo, hi = power.split_lag
    mask = (curve.lags <= lo) | (curve.lags >= hi)
    poly_res = log_residual(poly, curve, mask)
    power_res = log_residual(power, curve, mask)
    p_small = power.coefficients["p_small"]
    diag.update({"poly": poly.coefficients, "power": power.coefficients, "split_lag": [lo, hi],
                 "poly_log_residual": _finite(poly_res), "power_log_residual": _finite(power_res)})
    if p_small < rule.max_small_slope and poly_res > rule.margin * power_res:
        return SUBDIFFUSIVE, diag
    if poly_res <= rule.margin * power_res:
        return NTS, diag
    return UNDETERMINED, diag


def run_calibration(ensemble: TrajectoryEnsemble, config: CalibrationConfig | None = None) -> CalibrationReport:
    """MSD model selection followed by per-trajectory estimation.

    ``config.model`` forces the estimator; otherwise the selected model is used
    and no estimates are produced when the selection is undetermined. A failed
    fit is recorded in its row and does not stop the other trajectories.
    """
    cfg = config or CalibrationConfig()
    pts = ensemble.shared_grid.points
    steps = np.diff(pts)
    dt = cfg.dt if cfg.dt is not None else float(steps.mean())
    with warnings.catch_warnings():
        # a single trajectory is allowed here; the diagnostic records n_paths
        warnings.simplefilter("ignore")
        curve = empirical_msd(ensemble)
    selected, diag = select_model(curve, cfg.rule)
    model = cfg.model or (selected if selected != UNDETERMINED else None)
    rows = []
    for label, y in zip(ensemble.labels, ensemble.values):
        row = dict.fromkeys(TABLE_COLUMNS)
        row["trajectory"] = label
        if model is None:
            row["error"] = "no model selected"
        else:
            try:
                rep = estimate(model, y, dt, cfg.epsilon, cfg.nts, cfg.tail)
                row.update(alpha_hat=rep.alpha_hat, lambda_hat=rep.lambda_hat, beta_hat=rep.beta_hat,
                           objective=_finite(rep.objective))
            except (ValidationError, NumericalError) as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    provenance = {"version": __version__, "config": cfg.echo(), "estimator": model,
                  "n_trajectories": ensemble.n_paths, "n_points": int(pts.size), "dt": dt,
                  "uniform_grid": bool(np.allclose(steps, steps[0])),
                  "master_seed": ensemble.master_seed}
    return CalibrationReport(rows, diag, selected, cfg.rule.describe(), provenance)


def _dump_json(obj, path) -> None:
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    Path(path).write_text(text)


def emit_report(report: CalibrationReport, fmt: str, path) -> None:
    """Write ``report`` as JSON (everything) or CSV (one row per trajectory)."""
    if fmt == "json":
        _dump_json(report.as_dict(), path)
    elif fmt == "csv":
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TABLE_COLUMNS)
            for r in report.rows:
                w.writerow(["" if r[c] is None else (_fmt(r[c]) if isinstance(r[c], float) else r[c])
                            for c in TABLE_COLUMNS])
    else:
        raise ValidationError(f"unknown report format {fmt!r}")


def load_report(path) -> CalibrationReport:
    return CalibrationReport.from_dict(json.loads(Path(path).read_text()))


def msd_table(curve: MsdCurve, fit) -> list[list[str]]:
    """Plot-ready rows ``lag,msd,fit``; the fit column is empty where the model is undefined."""
    pred = fit.predict(curve.lags)
    rows = [["lag", "msd", "fit"]]
    for t, v, f in zip(curve.lags, curve.values, pred):
        rows.append([_fmt(t), _fmt(v), _fmt(f) if np.isfinite(f) else ""])
    return rows


def write_rows(rows, path) -> None:
    with Path(path).open("w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def regime_summary(curve: MsdCurve) -> dict:
    lo, hi = regime_bounds(curve.lags[curve.lags > 0])
    return {"small_regime_max_lag": lo, "large_regime_min_lag": hi}
