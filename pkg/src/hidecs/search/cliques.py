"""Maximal cliques (Bron–Kerbosch with Tomita pivoting) and overlap recomposition."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from ..graph import Graph


def _bits(xs: Iterable[int]) -> int:
    out = 0
    for x in xs:
        out |= 1 << x
    return out


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def canonical_sets(sets: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    """Size descending, then lexicographic."""
    return sorted({tuple(sorted(s)) for s in sets}, key=lambda c: (-len(c), c))


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """Every maximal clique exactly once, in canonical order."""
    nbr = [_bits(j for j in range(g.m) if g.adj[i, j]) for i in range(g.m)]
    found: list[tuple[int, ...]] = []
    # iterative Bron–Kerbosch; the pivot maximizes |P ∩ N(u)| (Tomita)
    stack = [(0, (1 << g.m) - 1, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                found.append(tuple(g.ids[i] for i in _members(r)))
            continue
        u = max(_members(p | x), key=lambda w: (nbr[w] & p).bit_count())
        for v in _members(p & ~nbr[u]):
            bit = 1 << v
            stack.append((r | bit, p & nbr[v], x & nbr[v]))
            p &= ~bit
            x |= bit
    return canonical_sets(found)


def brute_force_maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """Subset enumeration oracle (small graphs only)."""
    if g.m > 14:
        raise ValueError("brute force clique enumeration is capped at 14 vertices")
    cliques = [
        c
        for k in range(1, g.m + 1)
        for c in combinations(g.ids, k)
        if all(g.has_link(a, b) for a, b in combinations(c, 2))
    ]
    sets = [frozenset(c) for c in cliques]
    maximal = [c for c, s in zip(cliques, sets) if not any(s < t for t in sets)]
    return canonical_sets(maximal)


@dataclass(frozen=True)
class SemilatticeNode:
    id: int
    level: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class Semilattice:
    nodes: tuple[SemilatticeNode, ...]
    arcs: tuple[tuple[int, int], ...]            # (child id, parent id)
    construction: str = (
        "overlap-component recomposition (interpretation): level k+1 joins the "
        "connected components of the overlap graph on level k"
    )

    @property
    def levels(self) -> list[list[SemilatticeNode]]:
        out: list[list[SemilatticeNode]] = []
        for n in self.nodes:
            while len(out) <= n.level:
                out.append([])
            out[n.level].append(n)
        return out

    def children(self, node_id: int) -> list[int]:
        return [c for c, p in self.arcs if p == node_id]

    def is_acyclic(self) -> bool:
        lvl = {n.id: n.level for n in self.nodes}
        return all(lvl[c] < lvl[p] for c, p in self.arcs)

    def union_property(self) -> bool:
        mem = {n.id: set(n.members) for n in self.nodes}
        for n in self.nodes:
            kids = self.children(n.id)
            if n.level == 0:
                if kids:
                    return False
                continue
            if set().union(*(mem[k] for k in kids)) != mem[n.id]:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "nodes": [{"id": n.id, "level": n.level, "members": list(n.members)} for n in self.nodes],
            "arcs": [{"child": c, "parent": p} for c, p in self.arcs],
        }


def recompose_semilattice(g: Graph, cliques: Sequence[Iterable[int]]) -> Semilattice:
    sets = canonical_sets(cliques)
    if not sets:
        raise ValueError("need at least one set to recompose")
    missing = {v for s in sets for v in s} - set(g.ids)
    if missing:
        raise ValueError(f"sets mention vertices outside the graph: {sorted(missing)[:10]}")
    nodes: list[SemilatticeNode] = []
    arcs: list[tuple[int, int]] = []

    def add(level: int, members: Iterable[int]) -> int:
        nodes.append(SemilatticeNode(len(nodes), level, tuple(sorted(members))))
        return nodes[-1].id

    covered = sorted({v for s in sets for v in s})
    vid = {v: add(0, [v]) for v in covered}
    current = [add(1, s) for s in sets]
    for nid in current:
        for v in nodes[nid].members:
            arcs.append((vid[v], nid))

    level = 1
    while len(current) > 1:
        # union-find over overlapping nodes of the current level
        parent = list(range(len(current)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        mems = [set(nodes[n].members) for n in current]
        for i, j in combinations(range(len(current)), 2):
            if mems[i] & mems[j]:
                parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(len(current)):
            groups.setdefault(find(i), []).append(i)
        if all(len(grp) == 1 for grp in groups.values()):
            break
        level += 1
        comps = canonical_sets(set().union(*(mems[i] for i in grp)) for grp in groups.values())
        nxt = [add(level, c) for c in comps]
        where = {nodes[n].members: n for n in nxt}
        for grp in groups.values():
            target = where[tuple(sorted(set().union(*(mems[i] for i in grp))))]
            for i in grp:
                arcs.append((current[i], target))
        current = nxt
    return Semilattice(tuple(nodes), tuple(sorted(arcs)))
