"""Random-restart steepest-descent bisection and its brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..graph import Graph, Partition, induced_subgraph
from ..measures import bipartition_values, get_measure
from ..rng import MASK64, SplitMix64, splitmix_block
from .config import SearchConfig

IMPROVE_EPS = 1e-9
BRUTE_FORCE_MAX = 20


@dataclass(frozen=True)
class BisectResult:
    partition: Partition
    value: float
    restart_values: np.ndarray      # final measure value of each restart, in restart order
    distinct_optima: int

    def __iter__(self):
        yield self.partition
        yield self.value


def _bipartition(ids: tuple[int, ...], side: np.ndarray) -> Partition:
    a = frozenset(v for v, s in zip(ids, side) if s)
    b = frozenset(v for v, s in zip(ids, side) if not s)
    return Partition((a, b)).canonical()


def initial_sides(n: int, seeds: np.ndarray) -> np.ndarray:
    """Fair coin per vertex from each restart's stream; redraw while a side is empty."""
    draws = splitmix_block(seeds, n)
    sides = (draws >> np.uint64(63)).astype(bool)
    for r in np.flatnonzero(sides.all(axis=1) | ~sides.any(axis=1)):
        rng = SplitMix64(int(seeds[r]))
        for _ in range(n):
            rng.next_u64()
        while True:
            row = np.array([rng.coin() for _ in range(n)])
            if row.any() and not row.all():
                sides[r] = row
                break
    return sides


def _descend(measure: str, adj: np.ndarray, sides: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Steepest descent for every restart at once.  Returns (sides, minimized values)."""
    spec = get_measure(measure)
    sign = spec.sign
    n = adj.shape[0]
    l = int(adj.sum()) // 2
    A = adj.astype(np.int64)
    deg = A.sum(axis=1)
    x = sides.copy()
    din = x.astype(np.int64) @ A               # neighbours on side "a"
    a = x.sum(axis=1)
    la = (din * x).sum(axis=1) // 2
    lb = ((deg - din) * ~x).sum(axis=1) // 2
    cur = sign * bipartition_values(measure, n, l, a, la, lb)
    active = np.arange(x.shape[0])
    while active.size:
        xs, di = x[active], din[active]
        do = deg - di
        aa, la_, lb_ = a[active, None], la[active, None], lb[active, None]
        # move a->b for vertices on side a, b->a otherwise
        new_a = np.where(xs, aa - 1, aa + 1)
        new_la = np.where(xs, la_ - di, la_ + di)
        new_lb = np.where(xs, lb_ + do, lb_ - do)
        vals = sign * bipartition_values(measure, n, l, new_a, new_la, new_lb)
        vals[(new_a == 0) | (new_a == n)] = np.inf
        best = np.argmin(vals, axis=1)
        bval = vals[np.arange(active.size), best]
        improve = bval < cur[active] - IMPROVE_EPS
        rows, moves = active[improve], best[improve]
        if rows.size == 0:
            break
        was_a = x[rows, moves]
        step = np.where(was_a, -1, 1)
        x[rows, moves] = ~was_a
        din[rows] += step[:, None] * A[moves]
        a[rows] = new_a[improve, moves]
        la[rows] = new_la[improve, moves]
        lb[rows] = new_lb[improve, moves]
        cur[rows] = bval[improve]
        active = rows
    return x, cur


def restart_seeds(seed: int, latis: int) -> np.ndarray:
    return np.array([(seed + k) & MASK64 for k in range(latis)], dtype=np.uint64)


def bisect_best(g: Graph, s: Iterable[int] | None, cfg: SearchConfig) -> BisectResult:
    """Best bipartition of ``s`` over ``cfg.latis`` random restarts of steepest descent."""
    spec = cfg.spec
    sub = g if s is None else induced_subgraph(g, s)
    n = sub.m
    if n < 2:
        raise ValueError("need at least two vertices to bisect")
    sides, vals = _descend(cfg.measure, sub.adj, initial_sides(n, restart_seeds(cfg.seed, cfg.latis)))
    parts = [_bipartition(sub.ids, row) for row in sides]
    keys = [p.key() for p in parts]
    rounded = np.round(vals, 9)
    if cfg.restart_ties == "first-restart":
        # equal values: the lowest restart index wins, like a sequential run keeping its first best
        best = int(np.argmin(rounded))
    else:
        best = min(range(len(parts)), key=lambda k: (rounded[k], keys[k]))
    return BisectResult(
        partition=parts[best],
        value=float(spec.sign * vals[best]),
        restart_values=spec.sign * vals,
        distinct_optima=len(set(keys)),
    )


def brute_force_bipartition(g: Graph, s: Iterable[int] | None, measure: str) -> tuple[Partition, float]:
    """Exact optimum over every bipartition of ``s`` (at most 20 vertices)."""
    spec = get_measure(measure)
    sub = g if s is None else induced_subgraph(g, s)
    n = sub.m
    if n < 2:
        raise ValueError("need at least two vertices to bisect")
    if n > BRUTE_FORCE_MAX:
        raise ValueError(f"brute force is capped at {BRUTE_FORCE_MAX} vertices")
    # the last vertex always sits on side b, so each bipartition appears once
    masks = np.arange(1, 2 ** (n - 1), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    A = sub.adj.astype(np.int64)
    within_a = np.einsum("ri,ij,rj->r", bits, A, bits) // 2
    nb = 1 - bits
    within_b = np.einsum("ri,ij,rj->r", nb, A, nb) // 2
    vals = spec.sign * bipartition_values(measure, n, sub.total, bits.sum(axis=1), within_a, within_b)
    k = int(np.argmin(np.round(vals, 9)))
    return _bipartition(sub.ids, bits[k].astype(bool)), float(spec.sign * vals[k])
