"""The lights model: on lights go off at random, off lights are relit by on neighbours."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph
from ..rng import SplitMix64, numpy_generator


@dataclass(frozen=True)
class SettleStats:
    trials: int
    seed: int
    mean: float
    stderr: float
    max_steps: int


def simulate_homeostasis(
    g: Graph,
    trials: int,
    seed: int,
    *,
    p_off: float = 0.5,
    p_on: float = 0.5,
    workers: int = 1,
    step_cap: int = 1_000_000,
) -> SettleStats:
    """Mean number of steps until every light is off, all lights starting on.

    Each step applies both rules to the same pre-step state: an on light
    turns off with probability ``p_off``; an off light with at least one
    on neighbour turns on with probability ``p_on``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    A = g.adj.astype(np.int64)
    rng0 = SplitMix64(seed)
    base, extra = divmod(trials, workers)
    steps_all = []
    for k in range(workers):
        n = base + (k < extra)
        rng = numpy_generator(rng0.derive())
        on = np.ones((n, g.m), dtype=bool)
        steps = np.zeros(n, dtype=np.int64)
        live = np.arange(n)
        t = 0
        while live.size and t < step_cap:
            t += 1
            state = on[live]
            lit_nbr = (state.astype(np.int64) @ A) > 0
            u = rng.random(state.shape)
            new = np.where(state, u >= p_off, lit_nbr & (u < p_on))
            on[live] = new
            done = ~new.any(axis=1)
            steps[live[done]] = t
            live = live[~done]
        if live.size:
            raise RuntimeError("some trials did not settle within step_cap")
        steps_all.append(steps)
    s = np.concatenate(steps_all).astype(float)
    se = float(s.std(ddof=1) / np.sqrt(s.size)) if s.size > 1 else 0.0
    return SettleStats(trials, seed, float(s.mean()), se, int(s.max()))
