from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..graph import Partition, PartitionError


@dataclass(frozen=True)
class Pairing:
    pairs: tuple[tuple[int, int, int], ...]     # (cell index in a, cell index in b, overlap)
    unpaired_a: tuple[int, ...]
    unpaired_b: tuple[int, ...]

    @property
    def total_overlap(self) -> int:
        return sum(k for _, _, k in self.pairs)


def overlap_matrix(pa: Partition, pb: Partition) -> np.ndarray:
    return np.array([[len(a & b) for b in pb.cells] for a in pa.cells], dtype=np.int64)


def _lexicographic_assignment(w: np.ndarray) -> list[tuple[int, int]]:
    """Maximum-weight assignment; among optima, fix lowest indices first."""
    na, nb = w.shape
    best = w[linear_sum_assignment(w, maximize=True)].sum()
    fixed: list[tuple[int, int]] = []
    rows, cols = list(range(na)), list(range(nb))
    acc = 0
    while rows and cols:
        i = rows[0]
        for j in cols:
            rest_r = [r for r in rows if r != i]
            rest_c = [c for c in cols if c != j]
            sub = w[np.ix_(rest_r, rest_c)]
            rest = sub[linear_sum_assignment(sub, maximize=True)].sum() if sub.size else 0
            if acc + w[i, j] + rest == best:
                fixed.append((i, j))
                acc += w[i, j]
                rows, cols = rest_r, rest_c
                break
        else:  # row i stays unpaired (more rows than columns)
            rows = rows[1:]
    return fixed


def pair_partitions(pa: Partition, pb: Partition) -> Pairing:
    """One-to-one cell pairing with maximum total overlap; surplus cells unpaired."""
    if pa.universe != pb.universe:
        raise PartitionError("partitions must cover the same universe")
    w = overlap_matrix(pa, pb)
    pairs = _lexicographic_assignment(w)
    ia = {i for i, _ in pairs}
    ib = {j for _, j in pairs}
    return Pairing(
        tuple((i, j, int(w[i, j])) for i, j in pairs),
        tuple(i for i in range(len(pa.cells)) if i not in ia),
        tuple(j for j in range(len(pb.cells)) if j not in ib),
    )


def brute_force_pairing_total(pa: Partition, pb: Partition) -> int:
    """Best total overlap over all injections (small partitions only)."""
    w = overlap_matrix(pa, pb)
    if w.shape[0] > w.shape[1]:
        w = w.T
    na, nb = w.shape
    return max(sum(int(w[i, j]) for i, j in zip(range(na), perm)) for perm in permutations(range(nb), na))
