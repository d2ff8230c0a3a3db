"""Forward and lifetime constructions of the heterogeneous catastrophe population.

Convention used throughout: an individual is exempt from the catastrophe at the
transition right after its birth, so an individual born at ``j`` is alive at
``t > j`` with probability ``(1 - c)**(t - j - 1)``, i.e. ``P(G >= t - j)`` for a
geometric lifetime on {1, 2, ...}.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .distributions import CModel, RngStream

__all__ = [
    "Individual",
    "Trajectory",
    "SimConfig",
    "simulate_forward",
    "simulate_tilde",
    "alive_set",
    "trajectory_csv",
]


class Individual(NamedTuple):
    birth_time: int
    c: float


@dataclass(frozen=True)
class SimConfig:
    """Horizon, number of founders and the random stream address of one run."""

    horizon: int
    initial_size: int = 1
    seed: int = 0
    stream_id: int = 0
    record_alive: bool = False

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.initial_size < 1:
            raise ValueError("initial_size must be >= 1")

    def stream(self) -> RngStream:
        return RngStream(self.seed, self.stream_id)

    def with_stream(self, stream_id: int) -> "SimConfig":
        return replace(self, stream_id=stream_id)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Population sizes at times ``0..n`` and, optionally, the final alive set."""

    sizes: np.ndarray
    alive_births: Optional[np.ndarray] = None
    alive_c: Optional[np.ndarray] = None

    @property
    def horizon(self) -> int:
        return len(self.sizes) - 1

    @property
    def final_size(self) -> int:
        return int(self.sizes[-1])

    def to_csv(self) -> str:
        return trajectory_csv(self.sizes)


def trajectory_csv(sizes) -> str:
    """Serialise a size series as ``t,size`` CSV text."""
    buf = io.StringIO()
    buf.write("t,size\n")
    for t, x in enumerate(np.asarray(sizes).tolist()):
        buf.write(f"{t},{x}\n")
    return buf.getvalue()


def simulate_forward(config: SimConfig, model: CModel) -> Trajectory:
    """Run the population forward one catastrophe at a time.

    At time 0, ``initial_size`` founders are born. At every later step each
    individual born at least two steps earlier dies independently with its
    own probability ``c``, then one immigrant with a fresh ``c`` arrives.
    """
    n, m = config.horizon, config.initial_size
    rng = config.stream()
    sizes = np.empty(n + 1, dtype=np.int64)

    births = np.zeros(m, dtype=np.int64)
    cs = np.atleast_1d(model.sample(rng, m)).astype(float)
    sizes[0] = m
    for t in range(1, n + 1):
        # arrays stay sorted by birth time, so the exempt cohort is a suffix
        n_exempt = m if t == 1 else 1
        n_risk = births.size - n_exempt
        if n_risk > 0:
            u = rng.uniform(n_risk)
            keep = np.ones(births.size, dtype=bool)
            keep[:n_risk] = u >= cs[:n_risk]
            births = births[keep]
            cs = cs[keep]
        births = np.append(births, t)
        cs = np.append(cs, float(model.sample(rng)))
        sizes[t] = births.size

    if config.record_alive:
        return Trajectory(sizes, births, cs)
    return Trajectory(sizes)


def simulate_tilde(config: SimConfig, model: CModel) -> Trajectory:
    """Lifetime construction: keep index ``k`` iff its lifetime ``G_k >= k``.

    Draws ``c_0..c_n`` and one uniform per ``k >= 1``; index ``k`` survives with
    probability ``(1 - c_k)**(k - 1)``. Sizes are non-decreasing by design.
    """
    if config.initial_size != 1:
        raise ValueError("the lifetime construction is defined for a single founder")
    n = config.horizon
    rng = config.stream()
    cs = np.atleast_1d(model.sample(rng, n + 1)).astype(float)
    ks = np.arange(1, n + 1)
    u = rng.uniform(n)
    hit = u < np.power(1.0 - cs[1:], ks - 1)
    sizes = np.empty(n + 1, dtype=np.int64)
    sizes[0] = 1
    np.cumsum(hit, out=sizes[1:])
    sizes[1:] += 1

    if config.record_alive:
        keep = np.concatenate(([True], hit))
        return Trajectory(sizes, np.arange(n + 1)[keep], cs[keep])
    return Trajectory(sizes)


def alive_set(traj: Trajectory) -> list[Individual]:
    """Final alive set as ``(birth_time, c)`` pairs.

    Raises
    ------
    ValueError
        If the run was made without ``record_alive``.
    """
    if traj.alive_births is None:
        raise ValueError("alive set not recorded; rerun with record_alive=True")
    return [Individual(int(b), float(c)) for b, c in zip(traj.alive_births, traj.alive_c)]
