from __future__ import annotations

from ..graph import Partition
from ..search.topdown import DecompositionTree


def tree_level_partition(t: DecompositionTree, n: int) -> Partition:
    """Cells are the member sets of nodes at depth ``n``; shallower leaves persist."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    cells = [node.members for d, node in t.walk() if d == n or (d < n and node.is_leaf)]
    return Partition(tuple(cells))


def _chain(sets: list[frozenset[int]]) -> DecompositionTree:
    """Binary tree whose leaves are ``sets``: the first set splits off, the rest recurse."""
    if len(sets) == 1:
        return DecompositionTree(sets[0], leaf_reason="reference")
    if len(sets) == 2:
        return DecompositionTree(sets[0] | sets[1], (_chain(sets[:1]), _chain(sets[1:])))
    half = len(sets) // 2
    left, right = sets[:half], sets[half:]
    return DecompositionTree(frozenset().union(*sets), (_chain(left), _chain(right)))


def reference_tree() -> DecompositionTree:
    """A binary stand-in for the reference decomposition tree.

    Level 1 is {A∪C, B∪D}, level 2 is {A, B, C, D} and level 4 is the twelve
    minor sets.  Intermediate nodes grouping minor sets are a constructed
    choice (the original drawing is not machine-readable).
    """
    from ..datasets import reference_partitions

    rp = reference_partitions()
    minor = dict(zip(rp.ca_minor.cell_names(), rp.ca_minor.cells))

    def letter(name: str) -> DecompositionTree:
        sets = [minor[k] for k in sorted(minor) if k.startswith(name)]
        if len(sets) == 3:      # A1 | (A2, A3): keeps every minor set at depth 4 or as a persisting leaf
            return DecompositionTree(
                rp.letter(name), (_chain(sets[:1]), _chain(sets[1:]))
            )
        return _chain(sets)

    A, B, C, D = (letter(x) for x in "ABCD")
    ac = DecompositionTree(A.members | C.members, (A, C))
    bd = DecompositionTree(B.members | D.members, (B, D))
    return DecompositionTree(ac.members | bd.members, (ac, bd))
