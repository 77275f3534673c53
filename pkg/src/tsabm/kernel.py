"""Random streams and elementary variate samplers.

Every trajectory owns a :class:`RandomStream` keyed by ``(master_seed,
stream_index)``. The underlying generator is seeded through numpy's
``SeedSequence`` hash, so the draws of one stream never depend on how many
other streams exist or on the order in which they are consumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

_MASK64 = (1 << 64) - 1

# rejection sampler guard: expected trials per sub-increment are exp(lambda^alpha * h)
MAX_TILT_MASS = 1.0


@dataclass
class RandomStream:
    """Deterministic, splittable source of variates for one trajectory."""

    master_seed: int
    stream_index: int = 0
    _path: tuple[int, ...] = field(default=(), repr=False)
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValidationError("stream_index must be non-negative")
        ss = np.random.SeedSequence(
            int(self.master_seed) & _MASK64,
            spawn_key=(int(self.stream_index),) + tuple(self._path),
        )
        self._gen = np.random.Generator(np.random.PCG64(ss))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def substream(self, k: int) -> "RandomStream":
        """Independent child stream, e.g. one for the clock and one for the Gaussian part."""
        return RandomStream(self.master_seed, self.stream_index, self._path + (int(k),))


@dataclass(frozen=True)
class StableParams:
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0) or not math.isfinite(self.alpha):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class TemperParams:
    alpha: float
    lam: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0) or not math.isfinite(self.alpha):
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (self.lam >= 0.0) or not math.isfinite(self.lam):
            raise ValidationError(f"lambda must be finite and >= 0, got {self.lam!r}")

    @property
    def stable(self) -> StableParams:
        return StableParams(self.alpha)


def sample_standard_gaussian(stream: RandomStream, size=None):
    return stream.generator.standard_normal(size)


def _kanter(alpha: float, w: np.ndarray, e: np.ndarray) -> np.ndarray:
    # U = sin(aW) / sin(W)^(1/a) * (sin((1-a)W) / E)^((1-a)/a),  W ~ U(0, pi), E ~ Exp(1)
    return (
        np.sin(alpha * w)
        / np.sin(w) ** (1.0 / alpha)
        * (np.sin((1.0 - alpha) * w) / e) ** ((1.0 - alpha) / alpha)
    )


def sample_positive_stable(stream: RandomStream, p: StableParams, size=None):
    """Draw U(1) with Laplace transform exp(-z**alpha) (Kanter's representation)."""
    gen = stream.generator
    w = gen.uniform(0.0, np.pi, size)
    e = gen.standard_exponential(size)
    out = _kanter(p.alpha, np.asarray(w), np.asarray(e))
    # W within one ulp of 0 or pi gives 0 / inf; redraw those
    bad = ~(np.isfinite(out) & (out > 0))
    while np.any(bad):
        k = int(np.count_nonzero(bad))
        out[bad] = _kanter(p.alpha, gen.uniform(0.0, np.pi, k), gen.standard_exponential(k))
        bad = ~(np.isfinite(out) & (out > 0))
    return out if size is not None else float(out)


def split_counts(p: TemperParams, dt: np.ndarray) -> np.ndarray:
    """Number of equal sub-increments needed so that lambda^alpha * h <= MAX_TILT_MASS."""
    mass = p.lam ** p.alpha * np.asarray(dt, dtype=float)
    return np.maximum(1, np.ceil(mass / MAX_TILT_MASS)).astype(np.int64)


def _tilted_stable(stream: RandomStream, p: TemperParams, h: np.ndarray) -> np.ndarray:
    gen = stream.generator
    scale = h ** (1.0 / p.alpha)
    out = scale * sample_positive_stable(stream, p.stable, h.shape)
    if p.lam == 0.0:
        return out
    pending = np.flatnonzero(gen.random(h.shape) >= np.exp(-p.lam * out))
    while pending.size:
        cand = scale[pending] * sample_positive_stable(stream, p.stable, pending.size)
        out[pending] = cand
        pending = pending[gen.random(pending.size) >= np.exp(-p.lam * cand)]
    return out


def sample_tempered_stable_increment(stream: RandomStream, p: TemperParams, dt, size=None):
    """Draw T(dt) by exponential tilting of dt**(1/alpha) * U(1).

    ``dt`` may be a scalar (with ``size``) or an array of per-interval
    durations. Intervals whose tilt mass ``lambda**alpha * dt`` exceeds one are
    split into equal pieces whose draws are summed.
    """
    scalar = size is None and np.ndim(dt) == 0
    dt = np.broadcast_to(np.asarray(dt, dtype=float), size if size is not None else np.shape(dt))
    if np.any(dt <= 0) or not np.all(np.isfinite(dt)):
        raise ValidationError("increment durations must be positive and finite")
    flat = dt.ravel()
    n = split_counts(p, flat)
    if np.all(n == 1):
        out = _tilted_stable(stream, p, flat.copy())
    else:
        h = np.repeat(flat / n, n)
        pieces = _tilted_stable(stream, p, h)
        starts = np.concatenate(([0], np.cumsum(n)[:-1]))
        out = np.add.reduceat(pieces, starts)
    out = out.reshape(dt.shape)
    return float(out) if scalar else out
