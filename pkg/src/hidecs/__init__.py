"""HIDECS decomposition measures and searches, plus Newman–Girvan modularity."""

from __future__ import annotations

from .graph import (
    AsymmetryReport,
    Graph,
    LinkStats,
    ParseError,
    Partition,
    PartitionError,
    RawInteractionTable,
    induced_subgraph,
    is_clique,
    link_stats,
    parse_interactions,
    symmetrize,
)
from .measures import MEASURES, MeasureSpec, MeasureValue, evaluate, expected_cut_links

__all__ = [
    "AsymmetryReport",
    "Graph",
    "LinkStats",
    "MEASURES",
    "MeasureSpec",
    "MeasureValue",
    "ParseError",
    "Partition",
    "PartitionError",
    "RawInteractionTable",
    "evaluate",
    "expected_cut_links",
    "induced_subgraph",
    "is_clique",
    "link_stats",
    "parse_interactions",
    "symmetrize",
]

__version__ = "0.1.0"
