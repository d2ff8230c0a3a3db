"""Comparison chains with binomial thinning: X_n = B_{n-1} + Z_n, Z = 1.

Two regimes: every individual shares one fixed death probability, or all
individuals share a fresh random ``c_n`` at each step (random environment).
Both are positive recurrent, in contrast with the heterogeneous population.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .distributions import CModel, RngStream
from .population import Trajectory

__all__ = ["ConstantDeath", "RandomEnv", "FmsConfig", "RecurrenceStats",
           "simulate_fms", "recurrence_stats", "fms_expected_size"]


@dataclass(frozen=True)
class ConstantDeath:
    c: float

    def __post_init__(self):
        # c = 0 is allowed here: the chain then just counts arrivals
        if not (0.0 <= self.c <= 1.0):
            raise ValueError(f"need 0 <= c <= 1, got {self.c}")


@dataclass(frozen=True)
class RandomEnv:
    model: CModel


@dataclass(frozen=True)
class FmsConfig:
    c_mode: Union[ConstantDeath, RandomEnv]
    horizon: int
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if not isinstance(self.c_mode, (ConstantDeath, RandomEnv)):
            raise TypeError("c_mode must be ConstantDeath or RandomEnv")


class RecurrenceStats(NamedTuple):
    visits: int
    max_size: int
    time_avg: float


def simulate_fms(config: FmsConfig) -> Trajectory:
    """Simulate ``X_0 = 1``, ``X_n = Binomial(X_{n-1}, 1 - c_n) + 1``."""
    rng = RngStream(config.seed, config.stream_id)
    gen = rng.generator
    n = config.horizon
    x = np.empty(n + 1, dtype=np.int64)
    x[0] = 1
    mode = config.c_mode
    for t in range(1, n + 1):
        if isinstance(mode, RandomEnv):
            c = float(mode.model.sample(rng))
        else:
            c = mode.c
        x[t] = gen.binomial(x[t - 1], 1.0 - c) + 1
    return Trajectory(x)


def recurrence_stats(traj, level: int) -> RecurrenceStats:
    """Visits to ``{X <= level}``, running maximum and time average of a path."""
    sizes = np.asarray(traj.sizes if isinstance(traj, Trajectory) else traj)
    if sizes.size == 0:
        raise ValueError("empty trajectory")
    if level < 1:
        raise ValueError("level must be a positive integer")
    return RecurrenceStats(int(np.count_nonzero(sizes <= level)),
                           int(sizes.max()), float(sizes.mean()))


def fms_expected_size(c: float, n: int) -> float:
    """E(X_n) for a fixed death probability, solving E X_n = (1-c) E X_{n-1} + 1."""
    if c == 0.0:
        return float(n + 1)
    return 1.0 / c + (1.0 - 1.0 / c) * (1.0 - c) ** n
