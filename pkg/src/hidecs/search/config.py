from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

from ..measures import MeasureSpec, get_measure

TiePolicy = Literal["first-canonical", "exhaustive", "seeded-random"]
RestartTies = Literal["first-restart", "canonical"]
EXHAUSTIVE_MAX_M = 24


@dataclass(frozen=True)
class SearchConfig:
    measure: str = "h2-decomp"
    latis: int = 100
    seed: int = 0
    max_depth: int | None = None
    min_size: int = 3
    tie_policy: TiePolicy | None = None   # None: exhaustive for m <= 24, else first-canonical
    tie_branch_cap: int = 100_000
    restart_ties: RestartTies = "first-restart"   # how bisection picks among equal-valued restarts

    def __post_init__(self) -> None:
        get_measure(self.measure)
        if self.latis < 1:
            raise ValueError("latis must be at least 1")
        if self.min_size < 2:
            raise ValueError("min_size must be at least 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        if self.tie_policy not in (None, "first-canonical", "exhaustive", "seeded-random"):
            raise ValueError(f"unknown tie policy {self.tie_policy!r}")
        if self.restart_ties not in ("first-restart", "canonical"):
            raise ValueError(f"unknown restart tie rule {self.restart_ties!r}")
        if self.tie_branch_cap < 1:
            raise ValueError("tie_branch_cap must be positive")

    @property
    def spec(self) -> MeasureSpec:
        return get_measure(self.measure)

    def with_(self, **kw) -> SearchConfig:
        return replace(self, **kw)

    def effective_tie_policy(self, m: int) -> TiePolicy:
        if self.tie_policy is not None:
            return self.tie_policy
        return "exhaustive" if m <= EXHAUSTIVE_MAX_M else "first-canonical"
