"""Closed-form Laplace transforms, moments and tail approximant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..kernel import TemperParams
from ..paths import ModelParams


@dataclass(frozen=True)
class LaplaceQuery:
    z: float
    t: float

    def __post_init__(self):
        if not (self.z >= 0 and self.t >= 0):
            raise DomainError("Laplace queries need z >= 0 and t >= 0")


def laplace_subordinator(p: TemperParams, q: LaplaceQuery) -> float:
    """<exp(-z T(t))> = exp(t (lambda**alpha - (lambda + z)**alpha))."""
    return float(np.exp(q.t * (p.lam**p.alpha - (p.lam + q.z) ** p.alpha)))


def nts_exponent_base(p: ModelParams, z):
    """lambda + beta z - z**2 / 2, the base raised to alpha in the Y_T transform."""
    z = np.asarray(z, dtype=float)
    return p.lam + p.beta * z - 0.5 * z * z


def nts_domain_bound(p: ModelParams) -> float:
    """Largest z with lambda + beta z - z**2/2 >= 0."""
    return p.beta + np.sqrt(p.beta**2 + 2.0 * p.lam)


def laplace_nts_values(p: ModelParams, z, t: float = 1.0) -> np.ndarray:
    """Vectorised exp(t (lambda**alpha - (lambda + beta z - z**2/2)**alpha)); no domain check."""
    base = nts_exponent_base(p, z)
    return np.exp(t * (p.lam**p.alpha - np.maximum(base, 0.0) ** p.alpha))


def laplace_nts(p: ModelParams, q: LaplaceQuery) -> float:
    base = float(nts_exponent_base(p, q.z))
    if base < 0:
        raise DomainError(f"lambda + beta z - z^2/2 = {base:g} < 0 at z={q.z}")
    return float(np.exp(q.t * (p.lam**p.alpha - base**p.alpha)))


def _require_tempered(p):
    if not p.lam > 0:
        raise DomainError("moments of Y_T are infinite for lambda = 0")


def mean_nts(p: ModelParams, t: float) -> float:
    _require_tempered(p)
    return p.beta * t * p.alpha * p.lam ** (p.alpha - 1.0)


def cov_nts(p: ModelParams, t: float, s: float) -> float:
    _require_tempered(p)
    a, lam = p.alpha, p.lam
    return min(s, t) * (a * lam ** (a - 1.0) + p.beta**2 * a * (1.0 - a) * lam ** (a - 2.0))


def msd_nts_coefficients(p: ModelParams) -> tuple[float, float]:
    """(a, b) with <Y_T(t)**2> = a t**2 + b t.

    The quadratic coefficient is the squared mean rate (beta alpha lambda**(alpha-1))**2.
    """
    return mean_nts(p, 1.0) ** 2, cov_nts(p, 1.0, 1.0)


def msd_nts(p: ModelParams, t: float) -> float:
    return mean_nts(p, t) ** 2 + cov_nts(p, t, t)


def survival_ts_asymptotic(p: TemperParams, t: float, x):
    """Right-tail approximant exp(-lambda x + lambda**alpha t) (t / x)**alpha of P(T(t) > x)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or not t > 0:
        raise DomainError("need x > 0 and t > 0")
    out = np.exp(-p.lam * x + p.lam**p.alpha * t) * (t / x) ** p.alpha
    return out if out.ndim else float(out)
