"""Layered drawing order with barycenter crossing reduction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..search.cliques import Semilattice
from ..search.topdown import DecompositionTree


@dataclass(frozen=True)
class LayeredStructure:
    """Nodes per level plus arcs between adjacent levels (lower id, upper id)."""

    levels: tuple[tuple[int, ...], ...]
    labels: dict[int, tuple[int, ...]]
    arcs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class LayeredLayout:
    order: tuple[tuple[int, ...], ...]
    crossings: int
    initial_crossings: int
    sweeps: int


def from_semilattice(s: Semilattice) -> LayeredStructure:
    levels = tuple(tuple(n.id for n in lvl) for lvl in s.levels)
    return LayeredStructure(levels, {n.id: n.members for n in s.nodes}, s.arcs)


def from_tree(t: DecompositionTree) -> LayeredStructure:
    """Root at level 0; arcs run (parent, child) so lower id means nearer the root."""
    levels: list[list[int]] = []
    labels: dict[int, tuple[int, ...]] = {}
    arcs: list[tuple[int, int]] = []

    def visit(node: DecompositionTree, depth: int) -> int:
        nid = len(labels)
        labels[nid] = tuple(sorted(node.members))
        while len(levels) <= depth:
            levels.append([])
        levels[depth].append(nid)
        if node.children is not None:
            for c in node.children:
                arcs.append((nid, visit(c, depth + 1)))
        return nid

    visit(t, 0)
    return LayeredStructure(tuple(tuple(l) for l in levels), labels, tuple(arcs))


def as_layered(structure) -> LayeredStructure:
    if isinstance(structure, LayeredStructure):
        return structure
    if isinstance(structure, Semilattice):
        return from_semilattice(structure)
    if isinstance(structure, DecompositionTree):
        return from_tree(structure)
    raise TypeError(f"cannot lay out {type(structure).__name__}")


def count_crossings(st: LayeredStructure, order) -> int:
    pos = {n: i for lvl in order for i, n in enumerate(lvl)}
    level_of = {n: k for k, lvl in enumerate(order) for n in lvl}
    by_gap: dict[int, list[tuple[int, int]]] = {}
    for a, b in st.arcs:
        lo, hi = (a, b) if level_of[a] < level_of[b] else (b, a)
        by_gap.setdefault(level_of[lo], []).append((pos[lo], pos[hi]))
    total = 0
    for arcs in by_gap.values():
        for (u1, v1), (u2, v2) in combinations(arcs, 2):
            if (u1 - u2) * (v1 - v2) < 0:
                total += 1
    return total


def _sweep(st: LayeredStructure, order: list[list[int]], downward: bool) -> list[list[int]]:
    nbrs: dict[int, list[int]] = {}
    for a, b in st.arcs:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    new = [list(l) for l in order]
    rng = range(1, len(new)) if downward else range(len(new) - 2, -1, -1)
    for k in rng:
        ref = new[k - 1] if downward else new[k + 1]
        rpos = {n: i for i, n in enumerate(ref)}
        def key(item):
            i, n = item
            ps = [rpos[m] for m in nbrs.get(n, []) if m in rpos]
            return (sum(ps) / len(ps) if ps else float(i), i)
        new[k] = [n for _, n in sorted(enumerate(new[k]), key=key)]
    return new


def layout_layers(structure) -> LayeredLayout:
    """Barycenter sweeps, alternating down and up, kept only while crossings strictly drop."""
    st = as_layered(structure)
    order = [list(l) for l in st.levels]
    best = initial = count_crossings(st, order)
    sweeps = 0
    improved = True
    while improved and best > 0:
        improved = False
        for downward in (True, False):
            cand = _sweep(st, order, downward)
            c = count_crossings(st, cand)
            if c < best:
                order, best, improved = cand, c, True
                sweeps += 1
    return LayeredLayout(tuple(tuple(l) for l in order), best, initial, sweeps)
