"""Ensemble-averaged mean squared displacement and the two fitted MSD models."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from ..errors import FitError, InsufficientPaths, ValidationError
from ..paths import TrajectoryEnsemble

POLY = "second_order_polynomial"
POWER = "two_regime_power"
_ALIASES = {"poly2": POLY, "power2": POWER, POLY: POLY, POWER: POWER}


@dataclass
class MsdCurve:
    lags: np.ndarray
    values: np.ndarray
    n_paths: int

    def __post_init__(self):
        self.lags = np.asarray(self.lags, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.lags.shape != self.values.shape:
            raise ValidationError("lags and values differ in length")
        if np.any(np.diff(self.lags) <= 0):
            raise ValidationError("lags must be strictly increasing")
        if np.any(self.values < 0):
            raise ValidationError("MSD values must be non-negative")


@dataclass
class MsdFit:
    model_kind: str
    coefficients: dict
    residual: float
    split_lag: tuple[float, float] | None = None
    extra: dict = field(default_factory=dict)

    def predict(self, t):
        t = np.asarray(t, dtype=float)
        c = self.coefficients
        if self.model_kind == POLY:
            return c["a"] * t**2 + c["b"] * t
        small = c["c_small"] * t ** c["p_small"]
        large = c["c_large"] * t ** c["p_large"]
        return np.where(t <= self.split_lag[0], small, np.where(t >= self.split_lag[1], large, np.nan))


def empirical_msd(e: TrajectoryEnsemble) -> MsdCurve:
    """Average over paths of (X(t_k) - X(t_0))**2 for every grid time after the first."""
    if e.n_paths < 2:
        warnings.warn("ensemble MSD from a single trajectory is a time series, not an ensemble average",
                      InsufficientPaths, stacklevel=2)
    disp = e.values[:, 1:] - e.values[:, :1]
    lags = e.shared_grid.points[1:] - e.shared_grid.points[0]
    return MsdCurve(lags, np.mean(disp**2, axis=0), e.n_paths)


def regime_bounds(lags: np.ndarray) -> tuple[float, float]:
    """Lower and upper quartile of the lag range on a log scale."""
    lo, hi = np.log(lags[0]), np.log(lags[-1])
    return float(np.exp(lo + 0.25 * (hi - lo))), float(np.exp(lo + 0.75 * (hi - lo)))


def _loglog_fit(t, y):
    slope, intercept = np.polyfit(np.log(t), np.log(y), 1)
    res = np.log(y) - (intercept + slope * np.log(t))
    return float(np.exp(intercept)), float(slope), float(res @ res)


def fit_msd(curve: MsdCurve, model_kind: str = POLY, split_lag: tuple[float, float] | None = None,
            min_regime_points: int = 4) -> MsdFit:
    """Fit a*t**2 + b*t (non-negative, least squares on MSD/t), or separate power laws
    c*t**p at small and large lags (least squares in log-log)."""
    kind = _ALIASES.get(model_kind)
    if kind is None:
        raise ValidationError(f"unknown MSD model {model_kind!r}")
    t, y = curve.lags, curve.values
    keep = t > 0
    t, y = t[keep], y[keep]
    if not np.any(y > 0):
        raise FitError("MSD curve is identically zero")
    if kind == POLY:
        if t.size < 4:
            raise FitError("polynomial MSD fit needs at least 4 lags")
        # residuals relative to the lag: the spread of an ensemble MSD grows about linearly in t
        design = np.column_stack([t, np.ones_like(t)])
        rhs = y / t
        # column scaling keeps nnls well conditioned across lag ranges
        scale = np.linalg.norm(design, axis=0)
        coef, _ = nnls(design / scale, rhs)
        a, b = coef / scale
        r = rhs - design @ (coef / scale)
        return MsdFit(POLY, {"a": float(a), "b": float(b)}, float(r @ r))
    bounds = split_lag or regime_bounds(t)
    small = (t <= bounds[0]) & (y > 0)
    large = (t >= bounds[1]) & (y > 0)
    if small.sum() < min_regime_points or large.sum() < min_regime_points:
        raise FitError(f"two-regime fit needs >= {min_regime_points} positive lags per regime")
    cs, ps, rs = _loglog_fit(t[small], y[small])
    cl, pl, rl = _loglog_fit(t[large], y[large])
    coef = {"c_small": cs, "p_small": ps, "c_large": cl, "p_large": pl}
    return MsdFit(POWER, coef, rs + rl, split_lag=bounds)


def log_residual(fit: MsdFit, curve: MsdCurve, mask: np.ndarray) -> float:
    """Sum of squared log residuals of ``fit`` over the lags selected by ``mask``."""
    t, y = curve.lags[mask], curve.values[mask]
    pred = fit.predict(t)
    ok = (y > 0) & (pred > 0) & np.isfinite(pred)
    r = np.log(y[ok]) - np.log(pred[ok])
    return float(r @ r) if ok.any() else np.inf


def loglog_slope(t, y) -> float:
    return float(np.polyfit(np.log(t), np.log(y), 1)[0])
