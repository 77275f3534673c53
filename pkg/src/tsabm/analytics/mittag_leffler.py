"""Two-parameter Mittag-Leffler function E_{a,b}(x) = sum_k x**k / Gamma(a k + b) on the real line."""
from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.special import gammaln, rgamma

from ..errors import ConvergenceError, ValidationError

_BLOCK = 256
_MAX_TERMS = 2_000_000
_REL_TOL = 1e-17


def _log_terms(a, b, logx, k0, g=1.0):
    k = np.arange(k0, k0 + _BLOCK, dtype=float)
    out = k * logx - gammaln(a * k + b)
    if g != 1.0:
        out += gammaln(g + k) - gammaln(g) - gammaln(k + 1.0)
    return out


def log_mittag_leffler(a: float, b: float, x: float, g: float = 1.0) -> float:
    """log E^g_{a,b}(x) for x > 0 (three-parameter form; g = 1 is the usual function).

    All series terms are positive on the positive axis, so summing them in log
    space is exact up to rounding for any x; this avoids overflow when
    E_{a,b}(x) ~ exp(x**(1/a)) is huge.
    """
    if x <= 0:
        raise ValidationError("log_mittag_leffler needs x > 0")
    logx = math.log(x)
    # terms peak near k = x**(1/a) / a
    k_peak = g * x ** (1.0 / a) / a
    chunks, k0, top = [], 0, -np.inf
    while True:
        lt = _log_terms(a, b, logx, k0, g)
        chunks.append(lt)
        top = max(top, float(lt.max()))
        k0 += _BLOCK
        if k0 > k_peak and lt[-1] < top + math.log(_REL_TOL) and lt[-1] < lt[-2]:
            break
        if k0 > _MAX_TERMS:
            raise ConvergenceError(f"Mittag-Leffler series did not converge at x={x}")
    lt = np.concatenate(chunks)
    return top + math.log(np.exp(lt - top).sum())


def _negative_series(a, b, x):
    # alternating series; rounding error ~ eps * (largest term), so heavy cancellation
    # is handled in extended precision
    y = -x
    logy = math.log(y)
    # largest term is roughly exp(y**(1/a))
    if y ** (1.0 / a) > 2000 * math.log(10):
        return None
    k_peak = y ** (1.0 / a) / a
    chunks, k0 = [], 0
    while True:
        lt = _log_terms(a, b, logy, k0)
        chunks.append(lt)
        k0 += _BLOCK
        if k0 > k_peak and lt[-1] < math.log(1e-20) and lt[-1] < lt[-2]:
            break
        if k0 > _MAX_TERMS:
            raise ConvergenceError(f"Mittag-Leffler series did not converge at x={x}")
    log_mag = np.concatenate(chunks)
    # the sum may be many orders below its largest term, so even mild cancellation
    # is done with guard digits beyond those lost to the largest term
    digits = max(float(log_mag.max()) / math.log(10), 0.0)
    n = log_mag.size
    if digits > 2000:
        return None
    with mpmath.workdps(int(digits) + 30):
        xm = mpmath.mpf(x)
        return float(mpmath.fsum(xm ** k * mpmath.rgamma(a * k + b) for k in range(n)))


def _negative_asymptotic(a, b, x, tol):
    # E_{a,b}(-y) ~ -sum_{k>=1} (-y)^(-k) / Gamma(b - a k), 0 < a < 1, truncated at the smallest term
    y = -x
    total, prev = 0.0, math.inf
    for k in range(1, 200):
        term = -((-y) ** (-k)) * float(rgamma(b - a * k))
        if abs(term) > prev and term != 0.0:
            break
        total += term
        if term != 0.0:
            prev = abs(term)
        if prev < tol * max(abs(total), 1e-300):
            return total
    if prev < tol * max(abs(total), 1e-300) or prev < 1e-300:
        return total
    raise ConvergenceError(f"asymptotic Mittag-Leffler expansion too coarse at x={x}")


def mittag_leffler(a: float, b: float, x: float) -> float:
    """E_{a,b}(x) for real x, a > 0, b > 0.

    Positive arguments use the log-space series (inf if the value exceeds the
    float range); negative ones use the alternating series, in extended
    precision when cancellation is heavy, and the algebraic asymptotic
    expansion for very large |x| with 0 < a < 1.
    """
    if not (a > 0 and b > 0):
        raise ValidationError("Mittag-Leffler indices must be positive")
    x = float(x)
    if x == 0.0:
        return float(rgamma(b))
    if x > 0:
        lv = log_mittag_leffler(a, b, x)
        return math.exp(lv) if lv < 709.0 else math.inf
    if a < 1 and (-x) ** (1.0 / a) > 40:
        try:
            return _negative_asymptotic(a, b, x, 1e-13)
        except ConvergenceError:
            pass
    val = _negative_series(a, b, x)
    if val is not None:
        return val
    raise ConvergenceError(f"no convergent evaluation for E_({a},{b})({x})")


def scaled_mittag_leffler(a: float, b: float, x: np.ndarray, log_shift: np.ndarray,
                          g: float = 1.0) -> np.ndarray:
    """E^g_{a,b}(x) * exp(-log_shift) elementwise for x >= 0."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    shift = np.broadcast_to(np.asarray(log_shift, dtype=float), x.shape)
    out = np.empty_like(x)
    for i, (xi, si) in enumerate(zip(x, shift)):
        if xi == 0.0:
            out[i] = rgamma(b) * math.exp(-si)
        else:
            out[i] = math.exp(log_mittag_leffler(a, b, xi, g) - si)
    return out
