from __future__ import annotations

from .agglomerate import BldupResult, StablResult, bldup_agglomerate, brute_force_partition, stabl_search
from .counterexample import build_counterexample
from .bisect import BisectResult, bisect_best, brute_force_bipartition
from .cliques import Semilattice, brute_force_maximal_cliques, maximal_cliques, recompose_semilattice
from .config import SearchConfig
from .topdown import DecompositionTree, decompose_topdown

__all__ = [
    "BisectResult",
    "BldupResult",
    "DecompositionTree",
    "SearchConfig",
    "Semilattice",
    "StablResult",
    "bisect_best",
    "bldup_agglomerate",
    "brute_force_bipartition",
    "brute_force_maximal_cliques",
    "brute_force_partition",
    "build_counterexample",
    "decompose_topdown",
    "maximal_cliques",
    "recompose_semilattice",
    "stabl_search",
]
