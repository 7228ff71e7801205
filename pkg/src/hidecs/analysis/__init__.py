from __future__ import annotations

from .homeostasis import SettleStats, simulate_homeostasis
from .layout import LayeredLayout, count_crossings, layout_layers
from .levels import reference_tree, tree_level_partition
from .matrix import CohesionCouplingMatrix, cohesion_coupling_matrix, series_csv, sorted_ratio_series
from .pairing import Pairing, pair_partitions
from .sampling import CutStats, estimate_cut_stats

__all__ = [
    "CohesionCouplingMatrix",
    "CutStats",
    "LayeredLayout",
    "Pairing",
    "SettleStats",
    "cohesion_coupling_matrix",
    "count_crossings",
    "estimate_cut_stats",
    "layout_layers",
    "pair_partitions",
    "reference_tree",
    "series_csv",
    "simulate_homeostasis",
    "sorted_ratio_series",
    "tree_level_partition",
]
