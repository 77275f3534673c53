"""Arithmetic Brownian motion time-changed by tempered stable and inverse tempered stable clocks."""
from .kernel import RandomStream, StableParams, TemperParams
from .paths import ModelParams, SamplePath, TimeGrid, TrajectoryEnsemble, simulate_ensemble

__version__ = "0.1.0"
