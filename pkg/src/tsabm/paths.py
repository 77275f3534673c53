"""Sample paths of the subordinator, its inverse, ABM and the two time-changed processes."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, ValidationError
from .kernel import (
    RandomStream,
    TemperParams,
    sample_standard_gaussian,
    sample_tempered_stable_increment,
)

KINDS = ("subordinator", "inverse_subordinator", "abm", "nts", "subdiffusive")
# tag for trajectories read from data rather than simulated
OBSERVED = "observed"
MONOTONE_KINDS = ("subordinator", "inverse_subordinator")

# number of delta-steps per inverse-subordinator grid step
DELTA_REFINEMENT = 10


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    lam: float
    beta: float = 0.0

    def __post_init__(self):
        TemperParams(self.alpha, self.lam)
        if not math.isfinite(self.beta):
            raise ValidationError(f"beta must be finite, got {self.beta!r}")

    @property
    def temper(self) -> TemperParams:
        return TemperParams(self.alpha, self.lam)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "lambda": self.lam, "beta": self.beta}


@dataclass(frozen=True, eq=False)
class TimeGrid:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise GridError("a time grid needs at least 2 points")
        if not np.all(np.isfinite(pts)) or pts[0] < 0:
            raise GridError("grid points must be finite and non-negative")
        bad = np.flatnonzero(np.diff(pts) <= 0)
        if bad.size:
            raise GridError(f"grid not strictly increasing at index {bad[0] + 1}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, t_max: float, n_points: int, start: float = 0.0) -> "TimeGrid":
        return cls(np.linspace(start, t_max, n_points))

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        return isinstance(other, TimeGrid) and np.array_equal(self.points, other.points)

    def increments(self) -> np.ndarray:
        """Interval lengths, the first measured from time 0."""
        return np.diff(self.points, prepend=0.0)

    @property
    def min_step(self) -> float:
        return float(np.min(np.diff(self.points)))


@dataclass(frozen=True, eq=False)
class SamplePath:
    grid: TimeGrid
    values: np.ndarray
    kind: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise ValidationError("values and grid differ in length")
        if self.kind not in KINDS and self.kind != OBSERVED:
            raise ValidationError(f"unknown path kind {self.kind!r}")
        object.__setattr__(self, "values", vals)

    @property
    def times(self) -> np.ndarray:
        return self.grid.points


@dataclass(eq=False)
class TrajectoryEnsemble:
    """Paths sharing a grid and a kind; ``values`` has shape (n_paths, n_points)."""

    shared_grid: TimeGrid
    values: np.ndarray
    kind: str
    master_seed: int | None = None
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if self.values.shape[0] < 1:
            raise ValidationError("an ensemble needs at least one path")
        if self.values.shape[1] != len(self.shared_grid):
            raise ValidationError("path length does not match the shared grid")
        if not self.labels:
            self.labels = [f"traj_{i}" for i in range(self.values.shape[0])]

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def paths(self) -> list[SamplePath]:
        return [SamplePath(self.shared_grid, row, self.kind) for row in self.values]


def _cumulate(grid: TimeGrid, increments: np.ndarray, kind: str) -> SamplePath:
    return SamplePath(grid, np.cumsum(increments), kind)


def _clock_increments(params: TemperParams, grid: TimeGrid, stream: RandomStream) -> np.ndarray:
    dt = grid.increments()
    out = np.zeros_like(dt)
    pos = dt > 0
    out[pos] = sample_tempered_stable_increment(stream, params, dt[pos])
    return out


def simulate_subordinator(params: TemperParams, grid: TimeGrid, stream: RandomStream) -> SamplePath:
    return _cumulate(grid, _clock_increments(params, grid, stream), "subordinator")


def first_passage_steps(clock: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Number of completed clock steps before the clock first exceeds each level.

    ``clock[i]`` is T((i + 1) * delta); the return value is
    ``min{n >= 1 : T(n delta) > level} - 1``.
    """
    return np.searchsorted(clock, levels, side="right")


def _clock_until(params: TemperParams, level: float, delta: float, stream: RandomStream) -> np.ndarray:
    if params.lam > 0:
        mean_step = params.alpha * params.lam ** (params.alpha - 1.0) * delta
        chunk = int(min(max(1.2 * level / mean_step, 64), 1e6))
    else:
        chunk = 1024
    total, pieces = 0.0, []
    while True:
        inc = sample_tempered_stable_increment(stream, params, delta, size=chunk)
        c = total + np.cumsum(inc)
        pieces.append(c)
        total = c[-1]
        if total > level:
            return np.concatenate(pieces)
        chunk = max(chunk // 4, 64)


def simulate_inverse_subordinator(params: TemperParams, tau_grid: TimeGrid, delta: float | None,
                                  stream: RandomStream, return_clock: bool = False):
    """Discretised first-passage time S(tau) = inf{t : T(t) > tau} on ``tau_grid``.

    The clock is sampled at multiples of ``delta`` until it passes the last
    grid time; S(tau) is approximated from below by
    ``delta * (min{n : T(n delta) > tau} - 1)``, so S(0) = 0 and the error is
    at most ``delta``.
    """
    if delta is None:
        delta = tau_grid.min_step / DELTA_REFINEMENT
    if not (delta > 0):
        raise ValidationError("delta must be positive")
    clock = _clock_until(params, float(tau_grid.points[-1]), delta, stream)
    path = SamplePath(tau_grid, delta * first_passage_steps(clock, tau_grid.points),
                      "inverse_subordinator")
    return (path, clock) if return_clock else path


def simulate_abm(beta: float, grid: TimeGrid, stream: RandomStream) -> SamplePath:
    dt = grid.increments()
    inc = beta * dt + np.sqrt(dt) * sample_standard_gaussian(stream, dt.shape)
    return _cumulate(grid, inc, "abm")


def _brownian_on_clock(beta: float, dclock: np.ndarray, stream: RandomStream) -> np.ndarray:
    return np.cumsum(sample_standard_gaussian(stream, dclock.shape) * np.sqrt(dclock) + beta * dclock)


def simulate_nts(params: ModelParams, grid: TimeGrid, stream: RandomStream) -> SamplePath:
    dT = _clock_increments(params.temper, grid, stream.substream(0))
    return SamplePath(grid, _brownian_on_clock(params.beta, dT, stream.substream(1)), "nts")


def simulate_subdiffusive(params: ModelParams, tau_grid: TimeGrid, delta: float | None,
                          stream: RandomStream) -> SamplePath:
    s = simulate_inverse_subordinator(params.temper, tau_grid, delta, stream.substream(0))
    dS = np.diff(s.values, prepend=0.0)
    return SamplePath(tau_grid, _brownian_on_clock(params.beta, dS, stream.substream(1)),
                      "subdiffusive")


def simulate_path(kind: str, params: ModelParams, grid: TimeGrid, stream: RandomStream,
                  delta: float | None = None) -> SamplePath:
    if kind == "subordinator":
        return simulate_subordinator(params.temper, grid, stream)
    if kind == "inverse_subordinator":
        return simulate_inverse_subordinator(params.temper, grid, delta, stream)
    if kind == "abm":
        return simulate_abm(params.beta, grid, stream)
    if kind == "nts":
        return simulate_nts(params, grid, stream)
    if kind == "subdiffusive":
        return simulate_subdiffusive(params, grid, delta, stream)
    raise ValidationError(f"unknown path kind {kind!r}")


def _simulate_block(args) -> np.ndarray:
    kind, params, points, master_seed, start, stop, delta = args
    grid = TimeGrid(points)
    return np.stack([
        simulate_path(kind, params, grid, RandomStream(master_seed, i), delta).values
        for i in range(start, stop)
    ])


def simulate_ensemble(kind: str, params: ModelParams, grid: TimeGrid, n_paths: int,
                      master_seed: int, delta: float | None = None,
                      n_workers: int = 1) -> TrajectoryEnsemble:
    """``n_paths`` trajectories, path ``i`` drawn from stream ``(master_seed, i)``.

    The result does not depend on ``n_workers``.
    """
    if n_paths < 1:
        raise ValidationError("n_paths must be >= 1")
    if kind not in KINDS:
        raise ValidationError(f"unknown path kind {kind!r}")
    n_workers = max(1, min(int(n_workers), n_paths))
    bounds = np.linspace(0, n_paths, n_workers + 1).astype(int)
    jobs = [(kind, params, np.asarray(grid.points), master_seed, int(a), int(b), delta)
            for a, b in zip(bounds[:-1], bounds[1:])]
    if n_workers == 1:
        blocks = [_simulate_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(n_workers) as pool:
            blocks = list(pool.map(_simulate_block, jobs))
    return TrajectoryEnsemble(grid, np.concatenate(blocks), kind, master_seed)
