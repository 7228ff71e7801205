"""Searches over general partitions: BLDUP pair merges and STABL element moves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph, Partition
from ..measures import CellAggregates, aggregate_values, get_measure
from ..rng import SplitMix64
from .config import SearchConfig

IMPROVE_EPS = 1e-9


def _w(s):
    """Per-cell weight (s(s-1)+1)/2, zero for a vanished cell."""
    s = np.asarray(s, dtype=float)
    return np.where(s > 0, (s * (s - 1) + 1) / 2, 0.0)


def _w4(s):
    s = np.asarray(s, dtype=float)
    return _w(s) * 4.0 ** (-s)


class _State:
    """Cell statistics for a partition of the whole vertex set of ``adj``."""

    def __init__(self, adj: np.ndarray, labels: np.ndarray) -> None:
        self.A = adj.astype(np.int64)
        self.deg = self.A.sum(axis=1)
        self.m = adj.shape[0]
        self.l = int(self.A.sum()) // 2
        self.set_labels(labels)

    def set_labels(self, labels: np.ndarray) -> None:
        # relabel cells in canonical order (by smallest member position)
        _, first = np.unique(labels, return_index=True)
        order = np.argsort(first)
        remap = np.empty(labels.max() + 1, dtype=np.int64)
        remap[np.unique(labels)[order]] = np.arange(order.size)
        self.labels = remap[labels]
        k = order.size
        memb = np.zeros((self.m, k), dtype=np.int64)
        memb[np.arange(self.m), self.labels] = 1
        self.memb = memb
        self.N = self.A @ memb                          # neighbours of v in each cell
        block = memb.T @ self.N
        self.s = memb.sum(axis=0)
        self.li = np.diagonal(block) // 2
        self.E = block.copy()
        np.fill_diagonal(self.E, 0)
        self.D = memb.T @ self.deg

    @property
    def k(self) -> int:
        return self.s.size

    def aggregates(self) -> CellAggregates:
        s = self.s
        return CellAggregates(
            sum_l=np.array(self.li.sum(), dtype=float),
            sum_s2=np.array((s * s).sum(), dtype=float),
            sum_w=np.array(_w(s).sum()),
            sum_w4=np.array(_w4(s).sum()),
            sum_d2=np.array((self.D.astype(float) ** 2).sum()),
        )

    def key(self, ids) -> tuple:
        return tuple(tuple(ids[i] for i in np.flatnonzero(self.labels == c)) for c in range(self.k))


def _partition(ids, labels) -> Partition:
    cells: dict[int, list[int]] = {}
    for v, c in zip(ids, labels):
        cells.setdefault(int(c), []).append(v)
    return Partition(tuple(frozenset(c) for c in cells.values())).canonical()


# ---------------------------------------------------------------------------
# BLDUP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BldupResult:
    partition: Partition
    value: float
    history: tuple[float, ...]        # value after each merge, starting from the unit partition


def merge_values(st: _State, measure: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Measure value after merging each pair (i < j).  Returns (i, j, values)."""
    i, j = np.triu_indices(st.k, 1)
    agg = st.aggregates()
    s, D = st.s.astype(float), st.D.astype(float)
    merged = s[i] + s[j]
    after = CellAggregates(
        sum_l=agg.sum_l + st.E[i, j],
        sum_s2=agg.sum_s2 + 2 * s[i] * s[j],
        sum_w=agg.sum_w + _w(merged) - _w(s[i]) - _w(s[j]),
        sum_w4=agg.sum_w4 + _w4(merged) - _w4(s[i]) - _w4(s[j]),
        sum_d2=agg.sum_d2 + 2 * D[i] * D[j],
    )
    return i, j, aggregate_values(measure, st.m, st.l, after)


def bldup_agglomerate(g: Graph, cfg: SearchConfig | None = None) -> BldupResult:
    """Start from singletons and apply the best pair merge while it improves the measure."""
    cfg = cfg or SearchConfig(measure="h3-bldup")
    spec = cfg.spec
    if spec.arity != "any" or spec.direction != "minimize":
        raise ValueError("BLDUP needs a minimized any-partition measure (h3-bldup or h2-notes)")
    st = _State(g.adj, np.arange(g.m))
    cur = float(aggregate_values(cfg.measure, st.m, st.l, st.aggregates()))
    history = [cur]
    while st.k > 1:
        i, j, vals = merge_values(st, cfg.measure)
        best = int(np.argmin(np.round(vals, 9)))     # ties: lowest (i, j) in canonical cell order
        if not vals[best] < cur - IMPROVE_EPS:
            break
        labels = st.labels.copy()
        labels[labels == j[best]] = i[best]
        st.set_labels(labels)
        cur = float(vals[best])
        history.append(cur)
    return BldupResult(_partition(g.ids, st.labels), cur, tuple(history))


# ---------------------------------------------------------------------------
# STABL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StablResult:
    partition: Partition
    value: float
    tie_trace: tuple[int, ...]        # number of equal-best moves offered at each cycle
    history: tuple[float, ...]        # value before the first move, then after each move
    explored: int = 1                 # partitions expanded (exhaustive policy)
    truncated: bool = False           # exhaustive search hit its node budget


def move_values(st: _State, measure: str) -> np.ndarray:
    """Measure value after moving vertex v to cell d, shape (m, k); own cell is NaN."""
    agg = st.aggregates()
    v = np.arange(st.m)
    c = st.labels
    s, D = st.s.astype(float), st.D.astype(float)
    dv = st.deg.astype(float)[:, None]
    sc, sd = s[c][:, None], s[None, :]
    Dc, Dd = D[c][:, None], D[None, :]
    nvc = st.N[v, c].astype(float)[:, None]
    nvd = st.N.astype(float)
    after = CellAggregates(
        sum_l=agg.sum_l - nvc + nvd,
        sum_s2=agg.sum_s2 - sc**2 + (sc - 1) ** 2 - sd**2 + (sd + 1) ** 2,
        sum_w=agg.sum_w - _w(sc) + _w(sc - 1) - _w(sd) + _w(sd + 1),
        sum_w4=agg.sum_w4 - _w4(sc) + _w4(sc - 1) - _w4(sd) + _w4(sd + 1),
        sum_d2=agg.sum_d2 - Dc**2 + (Dc - dv) ** 2 - Dd**2 + (Dd + dv) ** 2,
    )
    vals = np.asarray(aggregate_values(measure, st.m, st.l, after), dtype=float)
    vals = np.broadcast_to(vals, (st.m, st.k)).copy()
    vals[v, c] = np.nan
    return vals


def _best_moves(st: _State, measure: str, sign: float, cur: float) -> tuple[list[tuple[int, int]], float]:
    """All equal-best improving moves as (vertex position, cell), in canonical order."""
    if st.k < 2:
        return [], cur
    vals = sign * move_values(st, measure)          # minimize
    r = np.round(np.where(np.isnan(vals), np.inf, vals), 9)
    best = r.min()
    if not best < np.round(sign * cur, 9) - IMPROVE_EPS:
        return [], cur
    vs, ds = np.nonzero(r == best)
    moves = sorted(zip(vs.tolist(), ds.tolist()))
    v0, d0 = moves[0]
    return moves, float(sign * vals[v0, d0])


def _apply(st: _State, move: tuple[int, int]) -> _State:
    v, d = move
    labels = st.labels.copy()
    labels[v] = d
    nxt = object.__new__(_State)
    nxt.A, nxt.deg, nxt.m, nxt.l = st.A, st.deg, st.m, st.l
    nxt.set_labels(labels)
    return nxt


def _value(st: _State, measure: str) -> float:
    return float(aggregate_values(measure, st.m, st.l, st.aggregates()))


def stabl_search(g: Graph, cfg: SearchConfig | None = None) -> StablResult:
    """Element moves from the unit partition while some move raises the measure.

    Tie policies: ``first-canonical`` takes the lowest vertex then the
    lowest destination cell (cells ordered by smallest member);
    ``seeded-random`` draws among the tied moves from the seed's stream;
    ``exhaustive`` branches on every tie, memoizing visited partitions,
    within ``tie_branch_cap`` expansions, and keeps the best terminal.
    """
    cfg = cfg or SearchConfig(measure="h3-stabl")
    spec = cfg.spec
    if spec.arity != "any" or spec.direction != "maximize":
        raise ValueError("STABL needs a maximized any-partition measure (h3-stabl or newman-q)")
    measure, sign = cfg.measure, spec.sign
    start = _State(g.adj, np.arange(g.m))
    policy = cfg.effective_tie_policy(g.m)

    def run(st, cur, trace, history, pick):
        while True:
            moves, _ = _best_moves(st, measure, sign, cur)
            if not moves:
                return st, cur, trace, history
            trace = trace + [len(moves)]
            st = _apply(st, pick(moves))
            cur = _value(st, measure)
            history = history + [cur]

    def first(moves):
        return moves[0]

    if policy != "exhaustive":
        rng = SplitMix64(cfg.seed)
        pick = first if policy == "first-canonical" else (lambda moves: moves[rng.randbelow(len(moves))])
        cur = _value(start, measure)
        st, cur, trace, history = run(start, cur, [], [cur], pick)
        return StablResult(_partition(g.ids, st.labels), cur, tuple(trace), tuple(history))

    # exhaustive: depth-first over tied moves, memoized on the partition reached
    seen: set[tuple] = set()
    best: dict = {}
    expanded = 0
    truncated = False

    def consider(st, cur, trace, history):
        key = st.key(g.ids)
        cand = (round(sign * cur, 9), key)
        if not best or cand < best["rank"]:
            best.update(rank=cand, state=st, value=cur, trace=tuple(trace), history=tuple(history))

    stack = [(start, _value(start, measure), [], [_value(start, measure)])]
    while stack:
        st, cur, trace, history = stack.pop()
        key = st.key(g.ids)
        if key in seen:
            continue
        seen.add(key)
        if expanded >= cfg.tie_branch_cap:
            # out of budget: finish this branch canonically so the result is a terminal
            truncated = True
            consider(*run(st, cur, trace, history, first))
            break
        expanded += 1
        moves, _ = _best_moves(st, measure, sign, cur)
        if not moves:
            consider(st, cur, trace, history)
            continue
        for mv in reversed(moves):                  # canonical-first exploration
            nxt = _apply(st, mv)
            val = _value(nxt, measure)
            stack.append((nxt, val, trace + [len(moves)], history + [val]))
    return StablResult(
        _partition(g.ids, best["state"].labels),
        best["value"],
        best["trace"],
        best["history"],
        explored=expanded,
        truncated=truncated,
    )


# ---------------------------------------------------------------------------
# Exhaustive oracle over all set partitions
# ---------------------------------------------------------------------------

BELL_MAX = 10


def _restricted_growth(n: int):
    a = [0] * n
    def rec(i: int, mx: int):
        if i == n:
            yield list(a)
            return
        for c in range(mx + 2):
            a[i] = c
            yield from rec(i + 1, max(mx, c))
    if n == 0:
        return
    yield from rec(1, 0)


def brute_force_partition(g: Graph, measure: str) -> tuple[Partition, float]:
    """Best partition of all vertices under ``measure`` by enumerating every set partition."""
    spec = get_measure(measure)
    if spec.arity != "any":
        raise ValueError("brute_force_partition needs an any-partition measure")
    if g.m > BELL_MAX:
        raise ValueError(f"partition enumeration is capped at {BELL_MAX} vertices")
    best_rank, best_labels, best_val = None, None, None
    for labels in _restricted_growth(g.m):
        st = _State(g.adj, np.array(labels))
        val = _value(st, measure)
        rank = (round(spec.sign * val, 9), st.key(g.ids))
        if best_rank is None or rank < best_rank:
            best_rank, best_labels, best_val = rank, st.labels, val
    return _partition(g.ids, best_labels), best_val
