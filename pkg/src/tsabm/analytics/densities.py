"""Densities and numerically evaluated transforms of T(t), S(tau), Y_T(t) and Y_S(tau)."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ..errors import DomainError, QuadratureError, ValidationError
from ..kernel import TemperParams
from ..paths import ModelParams
from .stable import stable_density

# composite Gauss-Legendre in log scale: panel width (natural-log units) and order
_PANEL = 0.25
_ORDER = 16
_MAX_PANELS = 600
# semi-infinite integrals stop where the integrand is 1e-12 of its peak
TAIL_RTOL = 1e-12


@lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _log_nodes(lo: np.ndarray, hi: np.ndarray):
    """Nodes and weights for int_lo^hi h(s) ds, one row per (lo, hi) pair."""
    span = np.maximum(hi - lo, 0.0)
    n = int(min(max(np.ceil(span.max(initial=0.0) / _PANEL), 1), _MAX_PANELS))
    xi, w = _gauss_legendre(_ORDER)
    xi = (np.arange(n)[:, None] + xi[None, :]).ravel() / n
    w = np.tile(w, n) / n
    s = lo[:, None] + span[:, None] * xi[None, :]
    return s, span[:, None] * w[None, :]


def _temper(p) -> TemperParams:
    if isinstance(p, TemperParams):
        return p
    if isinstance(p, ModelParams):
        return p.temper
    raise ValidationError("expected TemperParams or ModelParams")


def tempered_stable_pdf(p, t: float, x):
    """f_{T(t)}(x) = exp(-lambda x + lambda**alpha t) t**(-1/alpha) f_{U(1)}(x t**(-1/alpha))."""
    p = _temper(p)
    if not t > 0:
        raise ValidationError("t must be positive")
    x = np.asarray(x, dtype=float)
    g = stable_density(p.alpha)
    scale = t ** (1.0 / p.alpha)
    out = np.zeros(x.shape)
    pos = x > 0
    xp = x[pos]
    out[pos] = np.exp(-p.lam * xp + p.lam**p.alpha * t + g.logpdf(xp / scale)) / scale
    return out if out.ndim else float(out)


def _clock_integrals(p: TemperParams, tau: float, x: np.ndarray):
    """int_0^tau f_{T(x)}(u) du and int_0^tau u f_{T(x)}(u) du for each x > 0."""
    g = stable_density(p.alpha)
    c = x ** (1.0 / p.alpha)
    lo = np.full(x.shape, math.log(g.x_lo))
    hi = np.log(tau) - np.log(c)
    s, w = _log_nodes(lo, hi)
    v = np.exp(s)
    logk = g.logpdf(v) + s + (p.lam**p.alpha * x)[:, None] - p.lam * c[:, None] * v
    k = np.exp(logk) * w
    i0 = k.sum(axis=1)
    i1 = c * (k * v).sum(axis=1)
    return i0, i1


def survival_inverse_subordinator(p, tau: float, x):
    """P(S(tau) > x) = P(T(x) <= tau)."""
    p = _temper(p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.ones(x.shape)
    pos = x > 0
    if np.any(pos):
        out[pos] = np.minimum(_clock_integrals(p, tau, x[pos])[0], 1.0)
    return out


def inverse_subordinator_pdf(p, tau: float, x):
    """Density of S(tau) at x > 0.

    f(x) = tau f_{T(x)}(tau) / (alpha x)
           + lambda / (alpha x) * int_0^tau u f_{T(x)}(u) du
           - lambda**alpha * int_0^tau f_{T(x)}(u) du
    """
    p = _temper(p)
    if not tau > 0:
        raise ValidationError("tau must be positive")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(x.shape)
    pos = x > 0
    xp = x[pos]
    if xp.size:
        a, lam = p.alpha, p.lam
        g = stable_density(a)
        c = xp ** (1.0 / a)
        log_ft = -lam * tau + lam**a * xp + g.logpdf(tau / c) - np.log(c)
        first = tau / (a * xp) * np.exp(log_ft)
        if lam > 0:
            i0, i1 = _clock_integrals(p, tau, xp)
            out[pos] = first + lam / (a * xp) * i1 - lam**a * i0
        else:
            out[pos] = first
    # rounding in the cancelling terms can leave tiny negatives far in the tail
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


@lru_cache(maxsize=256)
def _s_support(alpha: float, lam: float, tau: float) -> tuple[float, float]:
    """(typical scale, upper cut-off) of S(tau): beyond the cut-off P(S > x) < TAIL_RTOL."""
    p = TemperParams(alpha, lam)
    scale = tau ** alpha if lam == 0 else min(tau ** alpha, tau / (alpha * lam ** (alpha - 1)))
    scale = max(scale, 1e-300)
    hi = scale
    for _ in range(200):
        if survival_inverse_subordinator(p, tau, hi)[0] < TAIL_RTOL:
            return scale, hi
        hi *= 1.5
    raise QuadratureError("could not bracket the support of S(tau)")


def _integrate_over_s(p: TemperParams, tau: float, weight, epsrel: float = 1e-10) -> float:
    """int_0^inf weight(x) f_{S(tau)}(x) dx, split into panels around the bulk."""
    scale, hi = _s_support(p.alpha, p.lam, float(tau))
    edges = np.unique(np.concatenate(([0.0], np.geomspace(scale * 1e-6, hi, 24))))
    total = err = 0.0
    for lo, up in zip(edges[:-1], edges[1:]):
        v, e = quad(lambda x: weight(x) * inverse_subordinator_pdf(p, tau, x), lo, up,
                    epsabs=0.0, epsrel=epsrel, limit=200)
        total += v
        err += e
    if not math.isfinite(total):
        raise QuadratureError("integral over the density of S(tau) diverged")
    return total


def laplace_inverse_subordinator(p, tau: float, z: float) -> float:
    """<exp(-z S(tau))> by quadrature of the density."""
    p = _temper(p)
    if z < 0 or not tau > 0:
        raise DomainError("need z >= 0 and tau > 0")
    return _integrate_over_s(p, tau, lambda x: math.exp(-z * x))


def moment_inverse_subordinator(p, tau: float, order: int) -> float:
    """<S(tau)**order> by quadrature of the density."""
    p = _temper(p)
    return _integrate_over_s(p, tau, lambda x: x**order)


def laplace_ys(p: ModelParams, tau: float, z: float) -> float:
    """<exp(-z Y_S(tau))> = int exp(-(beta z - z**2 / 2) x) f_{S(tau)}(x) dx."""
    if not tau > 0:
        raise DomainError("tau must be positive")
    rate = p.beta * z - 0.5 * z * z
    _, hi = _s_support(p.alpha, p.lam, float(tau))
    # S(tau) has a faster-than-exponential tail, but the float range still bounds the weight
    if -rate * hi > 700:
        raise DomainError(f"transform of Y_S not representable at z={z}")
    return _integrate_over_s(p.temper, tau, lambda x: math.exp(-rate * x))


def _gauss(x, mean, var):
    return np.exp(-((x - mean) ** 2) / (2.0 * var)) / np.sqrt(2.0 * math.pi * var)


def nts_pdf(p: ModelParams, t: float, x):
    """f_{Y_T(t)}(x) = int_0^inf N(x; beta z, z) f_{T(t)}(z) dz."""
    if not t > 0:
        raise ValidationError("t must be positive")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = stable_density(p.alpha)
    scale = t ** (1.0 / p.alpha)
    # v = z / scale; stop where tempering or the stable tail make the weight negligible
    v_hi = 800.0 / (p.lam * scale) if p.lam > 0 else 1e12
    if p.beta != 0:
        v_hi = min(v_hi, 1600.0 / (p.beta**2 * scale) + 2.0 * np.max(np.abs(x)) / abs(p.beta) / scale)
    v_hi = max(v_hi, 10.0 * g.x_lo)
    s, w = _log_nodes(np.array([math.log(g.x_lo)]), np.array([math.log(v_hi)]))
    s, w = s[0], w[0]
    v = np.exp(s)
    z = scale * v
    mix = np.exp(g.logpdf(v) + s - p.lam * z + p.lam**p.alpha * t) * w
    out = (_gauss(x[:, None], p.beta * z[None, :], z[None, :]) * mix[None, :]).sum(axis=1)
    return float(out[0]) if scalar else out


@lru_cache(maxsize=64)
def _s_mixing_nodes(alpha: float, lam: float, tau: float):
    """Nodes z and weights w with sum_j w_j h(z_j) ~ int_0^inf h(z) f_{S(tau)}(z) dz."""
    scale, hi = _s_support(alpha, lam, tau)
    # below scale * 1e-16 the omitted mass is O(1e-8) even against the z**-1/2 peak of N(0; 0, z)
    s, w = _log_nodes(np.array([math.log(scale * 1e-16)]), np.array([math.log(hi)]))
    z = np.exp(s[0])
    p = TemperParams(alpha, lam)
    # blocks bound the (nodes x clock-quadrature) work arrays
    f = np.concatenate([inverse_subordinator_pdf(p, tau, b) for b in np.array_split(z, max(1, z.size // 128))])
    return z, w[0] * z * f


def ys_pdf(p: ModelParams, tau: float, x):
    """f_{Y_S(tau)}(x) = int_0^inf N(x; beta z, z) f_{S(tau)}(z) dz."""
    if not tau > 0:
        raise ValidationError("tau must be positive")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    z, w = _s_mixing_nodes(p.alpha, p.lam, float(tau))
    out = np.concatenate([(_gauss(c[:, None], p.beta * z[None, :], z[None, :]) * w[None, :]).sum(axis=1)
                          for c in np.array_split(xs, max(1, xs.size // 256))])
    return float(out[0]) if scalar else out
