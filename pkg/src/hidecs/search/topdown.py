"""Recursive top-down bisection (HIDECS 2 style trees)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..graph import Graph, Partition, induced_subgraph, is_clique
from ..measures import evaluate
from ..rng import SplitMix64
from .bisect import bisect_best
from .config import SearchConfig


@dataclass(frozen=True)
class DecompositionTree:
    members: frozenset[int]
    children: tuple[DecompositionTree, DecompositionTree] | None = None
    value: float | None = None          # measure of the split at this node
    leaf_reason: str | None = None      # clique, small, depth

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("tree nodes must be nonempty")
        if self.children is not None:
            left, right = self.children
            if left.members & right.members or (left.members | right.members) != self.members:
                raise ValueError("children must partition their parent")

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    def leaves(self) -> list[DecompositionTree]:
        if self.children is None:
            return [self]
        return [lf for c in self.children for lf in c.leaves()]

    def leaf_partition(self) -> Partition:
        return Partition(tuple(lf.members for lf in self.leaves()))

    def split(self) -> Partition | None:
        if self.children is None:
            return None
        return Partition((self.children[0].members, self.children[1].members))

    def walk(self, depth: int = 0) -> Iterator[tuple[int, DecompositionTree]]:
        yield depth, self
        if self.children is not None:
            for c in self.children:
                yield from c.walk(depth + 1)

    @property
    def depth(self) -> int:
        return max(d for d, _ in self.walk())

    def key(self) -> tuple:
        """Shape identity: nested sorted member tuples, child order normalized."""
        if self.children is None:
            return (tuple(sorted(self.members)),)
        kids = sorted(c.key() for c in self.children)
        return (tuple(sorted(self.members)), tuple(kids))

    def to_json(self) -> dict:
        d: dict = {"members": sorted(self.members), "value": self.value}
        if self.children is not None:
            d["children"] = [c.to_json() for c in self.children]
        else:
            d["leaf_reason"] = self.leaf_reason
        return d

    @classmethod
    def from_json(cls, d: dict) -> DecompositionTree:
        kids = d.get("children")
        return cls(
            frozenset(d["members"]),
            None if kids is None else (cls.from_json(kids[0]), cls.from_json(kids[1])),
            d.get("value"),
            d.get("leaf_reason"),
        )


def _leaf_reason(g: Graph, s: frozenset[int], depth: int, cfg: SearchConfig) -> str | None:
    if len(s) < cfg.min_size:
        return "small"
    if cfg.max_depth is not None and depth >= cfg.max_depth:
        return "depth"
    if is_clique(g, s):
        return "clique"
    return None


def decompose_topdown(g: Graph, cfg: SearchConfig, universe=None) -> DecompositionTree:
    """Split recursively with :func:`bisect_best`.

    A node is a leaf when it is a clique, smaller than ``cfg.min_size``, or
    at ``cfg.max_depth``.  Children get seeds drawn from their parent's
    SplitMix64 stream, so the tree depends only on ``(g, cfg)``.
    """
    root = frozenset(g.ids if universe is None else universe)
    if len(root) < 2:
        raise ValueError("need at least two vertices")

    def build(s: frozenset[int], depth: int, seed: int) -> DecompositionTree:
        reason = _leaf_reason(g, s, depth, cfg)
        if reason is not None:
            return DecompositionTree(s, leaf_reason=reason)
        res = bisect_best(g, s, cfg.with_(seed=seed))
        rng = SplitMix64(seed)
        left, right = res.partition.cells
        kids = (build(left, depth + 1, rng.derive()), build(right, depth + 1, rng.derive()))
        return DecompositionTree(s, kids, res.value)

    return build(root, 0, cfg.seed)


def tree_values_consistent(g: Graph, t: DecompositionTree, measure: str, tol: float = 1e-9) -> bool:
    """Every internal node's recorded value equals re-evaluating its split."""
    for _, node in t.walk():
        if node.children is None:
            continue
        v = evaluate(measure, induced_subgraph(g, node.members), node.split()).value
        if abs(v - node.value) > tol * max(1.0, abs(v)):
            return False
    return True
