"""Graph model: interaction tables, SYMET symmetrization, partitions.

Vertex ids are 1-based everywhere a caller can see them.  Internally a
graph keeps its ids sorted and addresses the adjacency matrix by
position (0-based).
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PartitionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Interaction tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawInteractionTable:
    """Directed entries exactly as written: source -> listed targets."""

    entries: tuple[tuple[int, tuple[int, ...]], ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParseError("declared vertex count must be positive")
        seen: set[int] = set()
        for src, targets in self.entries:
            if not 1 <= src <= self.n:
                raise ParseError(f"id {src} outside 1..{self.n}")
            if src in seen:
                raise ParseError(f"duplicate source {src}")
            seen.add(src)
            for t in targets:
                if not 1 <= t <= self.n:
                    raise ParseError(f"id {t} outside 1..{self.n}")
                if t == src:
                    raise ParseError(f"vertex {src} lists itself")

    @property
    def directed_count(self) -> int:
        return sum(len(t) for _, t in self.entries)

    def targets(self) -> dict[int, tuple[int, ...]]:
        return dict(self.entries)

    def to_text(self, header: Sequence[str] = ()) -> str:
        lines = [f"# {h}" for h in header]
        lines.append(f"# vertices: {self.n}")
        for src, targets in self.entries:
            lines.append(f"{src} : {', '.join(map(str, targets))}".rstrip())
        return "\n".join(lines) + "\n"


_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*$")
_VERTICES = re.compile(r"^\s*#\s*vertices\s*:\s*(\d+)\s*$")


def parse_interactions(text: str, n: int | None = None) -> RawInteractionTable:
    """Parse ``<id> : <id>, <id>, ...`` lines.

    The vertex count comes from ``n``, else from a ``# vertices: N``
    comment, else the largest id seen.
    """
    entries: list[tuple[int, tuple[int, ...]]] = []
    sources: dict[int, int] = {}
    declared = n
    max_id = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        vm = _VERTICES.match(raw)
        if vm:
            if declared is None:
                declared = int(vm.group(1))
            continue
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"malformed line {raw!r}", lineno)
        src = int(m.group(1))
        body = m.group(2)
        targets: list[int] = []
        if body:
            for tok in body.split(","):
                tok = tok.strip()
                if not tok.isdigit():
                    raise ParseError(f"bad id {tok!r}", lineno)
                targets.append(int(tok))
        if src in sources:
            raise ParseError(f"duplicate source {src} (first on line {sources[src]})", lineno)
        if src in targets:
            raise ParseError(f"vertex {src} lists itself", lineno)
        sources[src] = lineno
        max_id = max([max_id, src, *targets])
        entries.append((src, tuple(targets)))
    if declared is None:
        declared = max_id
    for src, targets in entries:
        for t in (src, *targets):
            if not 1 <= t <= declared:
                raise ParseError(f"id {t} outside 1..{declared}", sources[src])
    return RawInteractionTable(tuple(entries), declared)


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected, unweighted, loop-free graph over 1-based vertex ids."""

    ids: tuple[int, ...]
    adj: np.ndarray = field(repr=False)
    labels: Mapping[int, str] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        adj = np.asarray(self.adj, dtype=bool)
        m = len(self.ids)
        if adj.shape != (m, m):
            raise ValueError("adjacency shape does not match vertex count")
        if list(self.ids) != sorted(set(self.ids)):
            raise ValueError("ids must be sorted and distinct")
        if adj.diagonal().any():
            raise ValueError("self-links are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        adj = adj.copy()
        adj.flags.writeable = False
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_links(
        cls,
        ids: Iterable[int],
        links: Iterable[tuple[int, int]],
        labels: Mapping[int, str] | None = None,
    ) -> Graph:
        ids = tuple(sorted(set(ids)))
        pos = {v: k for k, v in enumerate(ids)}
        adj = np.zeros((len(ids), len(ids)), dtype=bool)
        for i, j in links:
            if i == j:
                raise ValueError(f"self-link on {i}")
            adj[pos[i], pos[j]] = adj[pos[j], pos[i]] = True
        return cls(ids, adj, labels)

    @classmethod
    def complete(cls, m: int) -> Graph:
        return cls.from_links(range(1, m + 1), [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)])

    @classmethod
    def empty(cls, m: int) -> Graph:
        return cls.from_links(range(1, m + 1), [])

    @property
    def m(self) -> int:
        return len(self.ids)

    nbit = m

    @cached_property
    def total(self) -> int:
        return int(self.adj.sum()) // 2

    @property
    def nsq1(self) -> int:
        return self.m * (self.m - 1) // 2

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.ids)}

    @cached_property
    def links(self) -> frozenset[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adj, 1))
        return frozenset((self.ids[r], self.ids[c]) for r, c in zip(rows, cols))

    def sorted_links(self) -> list[tuple[int, int]]:
        return sorted(self.links)

    def has_link(self, i: int, j: int) -> bool:
        return bool(self.adj[self.index[i], self.index[j]])

    def neighbors(self, v: int) -> frozenset[int]:
        row = self.adj[self.index[v]]
        return frozenset(self.ids[k] for k in np.flatnonzero(row))

    def degree(self, v: int) -> int:
        return int(self.adj[self.index[v]].sum())

    def positions(self, vertices: Iterable[int]) -> np.ndarray:
        try:
            return np.array([self.index[v] for v in vertices], dtype=np.intp)
        except KeyError as exc:
            raise KeyError(f"vertex {exc.args[0]} not in graph") from None

    def relabel(self, mapping: Mapping[int, int]) -> Graph:
        """Rename vertices; ``mapping`` must be injective on ``ids``."""
        return Graph.from_links(
            (mapping[v] for v in self.ids),
            ((mapping[i], mapping[j]) for i, j in self.links),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.ids == other.ids and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.ids, self.links))


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = sorted(set(s))
    missing = [v for v in s if v not in g.index]
    if missing:
        raise KeyError(f"vertices not in graph: {missing[:10]}")
    pos = g.positions(s)
    labels = None if g.labels is None else {v: g.labels[v] for v in s if v in g.labels}
    return Graph(tuple(s), g.adj[np.ix_(pos, pos)], labels)


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    pos = g.positions(set(s))
    if len(pos) <= 1:
        return True
    sub = g.adj[np.ix_(pos, pos)]
    return int(sub.sum()) == len(pos) * (len(pos) - 1)


# ---------------------------------------------------------------------------
# SYMET
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymmetryReport:
    """One-way entries: ``(i, j)`` means j is listed under i but not i under j."""

    entries: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def per_vertex(self) -> dict[int, int]:
        c: Counter[int] = Counter()
        for i, j in self.entries:
            c[i] += 1
            c[j] += 1
        return dict(sorted(c.items()))

    def touching(self, v: int) -> int:
        return sum(1 for i, j in self.entries if v in (i, j))

    def lines(self) -> list[str]:
        return [f"{i} -> {j}" for i, j in self.entries]

    def arrow_lines(self) -> list[str]:
        """Grouped under the smaller id: ``→k`` if it lists k, ``←k`` if k lists it."""
        grouped: dict[int, list[tuple[int, str]]] = {}
        for i, j in self.entries:
            lo, hi = min(i, j), max(i, j)
            arrow = "→" if i == lo else "←"
            grouped.setdefault(lo, []).append((hi, f"{arrow}{hi}"))
        return [
            f"{lo} interacts with: " + ", ".join(tok for _, tok in sorted(items))
            for lo, items in sorted(grouped.items())
        ]


def symmetrize(
    raw: RawInteractionTable,
    *,
    promote: bool = False,
    labels: Mapping[int, str] | None = None,
) -> tuple[Graph, AsymmetryReport]:
    """Keep a link only when both directions are listed (SYMET's AND rule).

    ``promote=True`` keeps one-way entries as links instead; it exists for
    experiments only.
    """
    n = raw.n
    directed = np.zeros((n, n), dtype=bool)
    for src, targets in raw.entries:
        for t in targets:
            directed[src - 1, t - 1] = True
    np.fill_diagonal(directed, False)
    adj = (directed | directed.T) if promote else (directed & directed.T)
    oneway = directed & ~directed.T
    rows, cols = np.nonzero(oneway)
    entries = tuple(sorted((int(r) + 1, int(c) + 1) for r, c in zip(rows, cols)))
    return Graph(tuple(range(1, n + 1)), adj, labels), AsymmetryReport(entries)


def graph_to_table(g: Graph) -> RawInteractionTable:
    """Print a graph as a (symmetric) interaction table.  Requires ids 1..m."""
    if g.ids != tuple(range(1, g.m + 1)):
        raise ValueError("graph ids must be 1..m to print as a table")
    entries = tuple((v, tuple(sorted(g.neighbors(v)))) for v in g.ids)
    return RawInteractionTable(entries, g.m)


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    cells: tuple[frozenset[int], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for c in self.cells:
            if not c:
                raise PartitionError("empty cell")
            overlap = seen & c
            if overlap:
                raise PartitionError(f"cells overlap on {sorted(overlap)[:10]}")
            seen |= c
        if self.names is not None and len(self.names) != len(self.cells):
            raise PartitionError("one name per cell required")

    @classmethod
    def of(
        cls,
        cells: Iterable[Iterable[int]],
        names: Sequence[str] | None = None,
        universe: Iterable[int] | None = None,
    ) -> Partition:
        p = cls(tuple(frozenset(c) for c in cells), tuple(names) if names is not None else None)
        if universe is not None and p.universe != frozenset(universe):
            extra = sorted(p.universe - frozenset(universe))
            missing = sorted(frozenset(universe) - p.universe)
            raise PartitionError(f"cells do not cover the universe (extra {extra[:10]}, missing {missing[:10]})")
        return p

    @classmethod
    def unit(cls, vertices: Iterable[int]) -> Partition:
        return cls(tuple(frozenset([v]) for v in sorted(vertices)))

    @classmethod
    def from_labels(cls, labels: Mapping[int, object]) -> Partition:
        groups: dict[object, set[int]] = {}
        for v, lab in labels.items():
            groups.setdefault(lab, set()).add(v)
        return cls.of(groups.values()).canonical()

    @cached_property
    def universe(self) -> frozenset[int]:
        return frozenset().union(*self.cells) if self.cells else frozenset()

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def labels(self) -> dict[int, int]:
        return {v: k for k, c in enumerate(self.cells) for v in c}

    def canonical(self) -> Partition:
        """Cells sorted by their smallest member; names dropped."""
        return Partition(tuple(sorted(self.cells, key=min)))

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(c)) for c in self.cells))

    def same_as(self, other: Partition) -> bool:
        return self.key() == other.key()

    def cell_names(self) -> list[str]:
        return list(self.names) if self.names is not None else [str(k + 1) for k in range(len(self.cells))]

    def to_json(self) -> dict:
        d: dict = {"sets": [sorted(c) for c in self.cells]}
        if self.names is not None:
            d["names"] = list(self.names)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> Partition:
        if "sets" not in d:
            raise PartitionError('partition document needs a top-level "sets" field')
        sets = d["sets"]
        if isinstance(sets, Mapping):
            return cls.of(sets.values(), names=list(sets.keys()))
        return cls.of(sets, names=d.get("names"))


def read_partition(path: str | Path) -> Partition:
    return Partition.from_json(json.loads(Path(path).read_text()))


def write_partition(p: Partition, path: str | Path) -> None:
    Path(path).write_text(json.dumps(p.to_json(), indent=1) + "\n")


# ---------------------------------------------------------------------------
# Link statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkStats:
    """Counts over the subgraph induced by the partition's universe."""

    sizes: tuple[int, ...]
    internal: tuple[int, ...]
    cross: np.ndarray
    cut: int
    total: int
    m: int

    @property
    def degree_sums(self) -> np.ndarray:
        return 2 * np.asarray(self.internal) + self.cross.sum(axis=1)


def membership_matrix(g: Graph, p: Partition) -> np.ndarray:
    """Rows: vertices of ``g`` (positions); columns: cells.  Zero rows outside the universe."""
    memb = np.zeros((g.m, len(p.cells)), dtype=np.int64)
    for k, cell in enumerate(p.cells):
        memb[g.positions(cell), k] = 1
    return memb


def link_stats(g: Graph, p: Partition) -> LinkStats:
    missing = p.universe - set(g.ids)
    if missing:
        raise PartitionError(f"partition escapes the graph: {sorted(missing)[:10]}")
    memb = membership_matrix(g, p)
    a = g.adj.astype(np.int64)
    block = memb.T @ a @ memb
    internal = tuple(int(x) // 2 for x in np.diagonal(block))
    cross = block.copy()
    np.fill_diagonal(cross, 0)
    cut = int(cross.sum()) // 2
    return LinkStats(
        sizes=tuple(len(c) for c in p.cells),
        internal=internal,
        cross=cross,
        cut=cut,
        total=sum(internal) + cut,
        m=len(p.universe),
    )
