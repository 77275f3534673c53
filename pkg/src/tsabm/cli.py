"""Command-line front end: ``tsabm {simulate,estimate,msd,validate,transform,density}``."""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (
    inverse_subordinator_pdf,
    laplace_inverse_subordinator,
    laplace_nts_values,
    laplace_ys,
    nts_pdf,
    stable_density,
    tempered_stable_pdf,
    ys_pdf,
)
from .analytics.msd import empirical_msd, fit_msd
from .errors import NumericalError, TsabmError, ValidationError
from .estimation import IncrementSeries, NtsConfig, empirical_laplace, validate_estimator
from .paths import ModelParams, TimeGrid, simulate_ensemble
from .pipeline import (
    CalibrationConfig,
    _dump_json,
    _fmt,
    emit_report,
    ingest_csv,
    msd_table,
    regime_summary,
    run_calibration,
    write_ensemble_csv,
    write_rows,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

# command-line model names -> path kinds
MODEL_KINDS = {"nts": "nts", "subdiff": "subdiffusive", "subordinator": "subordinator",
               "inverse": "inverse_subordinator", "abm": "abm"}


def _fmt_of(args) -> str:
    if args.format:
        return args.format
    return "json" if Path(args.out).suffix.lower() == ".json" else "csv"


def _params(args) -> ModelParams:
    return ModelParams(args.alpha, args.lam, args.beta)


def cmd_simulate(args) -> None:
    grid = TimeGrid.uniform(args.t_max, args.n_points)
    e = simulate_ensemble(MODEL_KINDS[args.model], _params(args), grid, args.n_paths, args.seed,
                          n_workers=args.workers)
    write_ensemble_csv(e, args.out)


def cmd_estimate(args) -> None:
    ens = ingest_csv(args.input)
    cfg = CalibrationConfig(model=MODEL_KINDS[args.model] if args.model else None, epsilon=args.epsilon,
                            nts=NtsConfig(z_max=args.z_max))
    report = run_calibration(ens, cfg)
    report.provenance["input"] = Path(args.input).name
    emit_report(report, _fmt_of(args), args.out)


def cmd_msd(args) -> None:
    ens = ingest_csv(args.input)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        curve = empirical_msd(ens)
    fit = fit_msd(curve, args.fit)
    if _fmt_of(args) == "json":
        _dump_json({"model": fit.model_kind, "coefficients": fit.coefficients, "residual": fit.residual,
                    "split_lag": list(fit.split_lag) if fit.split_lag else None,
                    "n_paths": curve.n_paths, "regimes": regime_summary(curve),
                    "lags": curve.lags.tolist(), "msd": curve.values.tolist()}, args.out)
    else:
        write_rows(msd_table(curve, fit), args.out)


def cmd_validate(args) -> None:
    if args.model not in ("nts", "subdiff"):
        raise ValidationError("validate supports --model nts or subdiff")
    s = validate_estimator(MODEL_KINDS[args.model], _params(args), args.reps, args.len, args.seed,
                           n_workers=args.workers)
    if _fmt_of(args) == "json":
        _dump_json({**s.as_dict(), "version": __version__}, args.out)
        return
    q = s.quantiles()
    truth = s.true_params.as_dict()
    cols = ["parameter", "true", "min", "q10", "q25", "median", "q75", "q90", "max"]
    rows = [cols] + [[name, _fmt(truth[name]), *(_fmt(q[name][c]) if q[name] else "" for c in cols[2:])]
                     for name in ("alpha", "lambda", "beta")]
    write_rows(rows, args.out)


def _z_grid(args) -> np.ndarray:
    return np.linspace(args.z_max / args.n_points, args.z_max, args.n_points)


def cmd_transform(args) -> None:
    p = _params(args)
    z = _z_grid(args)
    if args.model == "nts":
        cols = {"analytic": laplace_nts_values(p, z, args.t)}
    elif args.model == "subordinator":
        cols = {"analytic": np.exp(args.t * (p.lam**p.alpha - (p.lam + z) ** p.alpha))}
    elif args.model == "inverse":
        cols = {"analytic": np.array([laplace_inverse_subordinator(p.temper, args.t, v) for v in z])}
    else:
        cols = {"analytic": np.array([laplace_ys(p, args.t, v) for v in z])}
    if args.input:
        ens = ingest_csv(args.input)
        inc = np.concatenate([IncrementSeries.from_observations(v).values for v in ens.values])
        cols = {"empirical": empirical_laplace(IncrementSeries(inc), z), **cols}
    rows = [["z", *cols]] + [[_fmt(v), *(_fmt(c[i]) for c in cols.values())] for i, v in enumerate(z)]
    write_rows(rows, args.out)


def cmd_density(args) -> None:
    p = _params(args)
    x = np.linspace(args.x_min, args.x_max, args.n_points)
    if args.model == "stable":
        y = stable_density(p.alpha)(x)
    elif args.model == "subordinator":
        y = tempered_stable_pdf(p.temper, args.t, x)
    elif args.model == "inverse":
        y = inverse_subordinator_pdf(p.temper, args.t, x)
    elif args.model == "nts":
        y = nts_pdf(p, args.t, x)
    else:
        y = ys_pdf(p, args.t, x)
    write_rows([["x", "pdf"]] + [[_fmt(a), _fmt(b)] for a, b in zip(x, np.atleast_1d(y))], args.out)


def _model_args(sp, required=True):
    sp.add_argument("--alpha", type=float, required=required)
    sp.add_argument("--lambda", dest="lam", type=float, required=required)
    sp.add_argument("--beta", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tsabm", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="simulate an ensemble to CSV")
    sp.add_argument("--model", choices=sorted(MODEL_KINDS), required=True)
    _model_args(sp)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--n-points", type=int, required=True)
    sp.add_argument("--n-paths", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate, format="csv")

    sp = sub.add_parser("estimate", help="MSD model selection and per-trajectory estimates")
    sp.add_argument("--model", choices=["nts", "subdiff"])
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--z-max", type=float)
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("msd", help="ensemble MSD with a fitted model, plot-ready")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--fit", choices=["poly2", "power2"], default="poly2")
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_msd)

    sp = sub.add_parser("validate", help="replication study of an estimator")
    sp.add_argument("--model", choices=["nts", "subdiff"], required=True)
    _model_args(sp)
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--len", type=int, default=1000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("transform", help="analytic (and optional empirical) Laplace transform curve")
    sp.add_argument("--model", choices=["nts", "subordinator", "inverse", "subdiff"], default="nts")
    _model_args(sp)
    sp.add_argument("--t", type=float, default=1.0, help="time (or tau) of the transform")
    sp.add_argument("--z-max", type=float, default=1.0)
    sp.add_argument("--n-points", type=int, default=20)
    sp.add_argument("--in", dest="input", help="trajectory CSV for the empirical column")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_transform, format="csv")

    sp = sub.add_parser("density", help="analytic density curve")
    sp.add_argument("--model", choices=["stable", "subordinator", "inverse", "nts", "subdiff"], required=True)
    _model_args(sp)
    sp.add_argument("--t", type=float, default=1.0, help="time (or tau) of the density")
    sp.add_argument("--x-min", type=float, default=0.1)
    sp.add_argument("--x-max", type=float, default=5.0)
    sp.add_argument("--n-points", type=int, default=50)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_density, format="csv")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, TsabmError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
