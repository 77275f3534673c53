"""Density of the one-sided stable law with Laplace transform exp(-z**alpha).

Pointwise values come from Zolotarev's integral over (0, pi). Nested
integrals (tempered, inverse and mixture densities) instead use
:class:`StableDensity`, a per-alpha cached log-log spline of the same
quadrature, with the convergent large-x series beyond the tabulated range.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gammaln

from ..errors import QuadratureError, ValidationError
from ..kernel import StableParams

# exp(-700) is the smallest weight kept before switching to the small-x asymptotic
_UNDERFLOW = 700.0
_TABLE_NODES = 2000
_TABLE_XMAX = 1e4
_SERIES_TERMS = 80


def _alpha_of(p) -> float:
    return p.alpha if isinstance(p, StableParams) else StableParams(float(p)).alpha


def log_zolotarev_a(alpha: float, phi):
    """log A(phi); the sampler writes U = (A(W) / E)**((1 - alpha) / alpha)."""
    k = alpha / (1.0 - alpha)
    return (k * np.log(np.sin(alpha * phi)) + np.log(np.sin((1.0 - alpha) * phi))
            - np.log(np.sin(phi)) / (1.0 - alpha))


def zolotarev_a0(alpha: float) -> float:
    """A(0+) = alpha**(alpha / (1 - alpha)) * (1 - alpha), the minimum of A."""
    return alpha ** (alpha / (1.0 - alpha)) * (1.0 - alpha)


def _a_curvature(alpha: float) -> float:
    # log A(phi) = log A0 - c phi**2 + O(phi**4)
    k = alpha / (1.0 - alpha)
    return (k * alpha**2 + (1.0 - alpha) ** 2 - 1.0 / (1.0 - alpha)) / -6.0


def _small_x_pdf(alpha: float, x: float) -> float:
    # Laplace's method around phi = 0 where A is smallest
    k = alpha / (1.0 - alpha)
    a0 = zolotarev_a0(alpha)
    log_ay = math.log(a0) - k * math.log(x)
    if log_ay > 700.0:
        return 0.0
    ay = math.exp(log_ay)
    c = _a_curvature(alpha)
    log_int = log_ay - ay + 0.5 * math.log(math.pi / (4.0 * ay * c))
    return math.exp(math.log(k / (math.pi * x)) + log_int)


def stable_pdf(p, x: float, epsrel: float = 1e-10) -> float:
    """f_{U(1)}(x) by adaptive quadrature of the Zolotarev integrand."""
    alpha = _alpha_of(p)
    x = float(x)
    if not x > 0:
        raise ValidationError("stable_pdf needs x > 0")
    k = alpha / (1.0 - alpha)
    log_y = -k * math.log(x)
    a0 = zolotarev_a0(alpha)
    if log_y + math.log(a0) > math.log(_UNDERFLOW):
        return _small_x_pdf(alpha, x)

    def integrand(phi):
        t = log_zolotarev_a(alpha, phi) + log_y
        return math.exp(t - math.exp(t)) if t < 700 else 0.0

    # log(A y) increases monotonically in phi; split (0, pi) at level crossings so
    # every piece sees a resolved part of the peak at A y = 1
    hi = math.pi * (1 - 1e-12)
    g = lambda ph, level: log_zolotarev_a(alpha, ph) + log_y - level
    t0 = math.log(a0) + log_y
    cut = math.log(max(math.exp(t0), 1.0) + 40.0)
    levels = [lv for lv in (-40.0, -20.0, -10.0, -5.0, -2.0, 0.0, 1.0, 2.0) if t0 < lv < cut]
    edges = [0.0]
    for lv in levels + [cut]:
        if g(hi, lv) <= 0:
            edges.append(math.pi)
            break
        edges.append(brentq(g, max(edges[-1], 1e-300), hi, args=(lv,), xtol=1e-16))
    val = err = 0.0
    for lo, up in zip(edges[:-1], edges[1:]):
        v, e = quad(integrand, lo, up, epsabs=0.0, epsrel=epsrel, limit=200)
        val += v
        err += e
    if not math.isfinite(val) or (val > 0 and err > 1e3 * epsrel * val + 1e-300):
        raise QuadratureError(f"stable_pdf quadrature failed at x={x} (err {err:g})")
    return k / (math.pi * x) * val


def stable_cdf(p, x: float, epsrel: float = 1e-10) -> float:
    """P(U(1) <= x) = (1/pi) * int_0^pi exp(-A(phi) x**(-alpha/(1-alpha))) dphi."""
    alpha = _alpha_of(p)
    if not x > 0:
        return 0.0
    log_y = -alpha / (1.0 - alpha) * math.log(x)

    def integrand(phi):
        t = log_zolotarev_a(alpha, phi) + log_y
        return math.exp(-math.exp(t)) if t < 7 else 0.0

    val, _ = quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=epsrel, limit=400)
    return val / math.pi


def stable_pdf_series(alpha: float, x, terms: int = _SERIES_TERMS):
    """Convergent large-x expansion (1/pi) sum (-1)^(k+1) Gamma(alpha k + 1)/k! sin(pi alpha k) x^(-alpha k - 1)."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, terms + 1, dtype=float)
    log_coef = gammaln(alpha * k + 1.0) - gammaln(k + 1.0)
    sign = (-1.0) ** (k + 1) * np.sin(math.pi * alpha * k)
    lx = np.log(x)[..., None]
    terms_ = sign * np.exp(log_coef - (alpha * k + 1.0) * lx)
    return terms_.sum(axis=-1) / math.pi


class StableDensity:
    """Vectorised f_{U(1)} for one alpha: log-log cubic spline plus series tail."""

    def __init__(self, alpha: float, nodes: int = _TABLE_NODES):
        self.alpha = float(alpha)
        k = alpha / (1.0 - alpha)
        self.x_lo = (zolotarev_a0(alpha) / _UNDERFLOW) ** (1.0 / k)
        self.x_hi = _TABLE_XMAX
        s = np.linspace(math.log(self.x_lo), math.log(self.x_hi), nodes)
        logf = np.array([math.log(stable_pdf(alpha, math.exp(v), epsrel=1e-11)) for v in s])
        self._spline = CubicSpline(s, logf)

    def logpdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, -np.inf)
        mid = (x >= self.x_lo) & (x <= self.x_hi)
        out[mid] = self._spline(np.log(x[mid]))
        far = x > self.x_hi
        if np.any(far):
            out[far] = np.log(stable_pdf_series(self.alpha, x[far]))
        return out

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    __call__ = pdf


@lru_cache(maxsize=32)
def stable_density(alpha: float) -> StableDensity:
    return StableDensity(alpha)
