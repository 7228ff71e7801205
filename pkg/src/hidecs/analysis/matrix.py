from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from ..graph import Graph, Partition, link_stats


def format_ratio(x: float, digits: int = 3) -> str:
    """Leading-dot decimal like ``.444``; exact decimal halves round to even (.0875 -> .088)."""
    d = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    s = f"{d:.{digits}f}"
    return s[1:] if s.startswith("0.") else s


@dataclass(frozen=True)
class CohesionCouplingMatrix:
    labels: tuple[str, ...]
    values: np.ndarray      # diagonal: cohesion, off-diagonal: coupling

    def cohesion(self, name: str) -> float:
        k = self.labels.index(name)
        return float(self.values[k, k])

    def coupling(self, a: str, b: str) -> float:
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def to_text(self, digits: int = 3) -> str:
        """Aligned table with leading-dot cells, like ``.444``."""
        def cell(x: float) -> str:
            return format_ratio(x, digits)

        width = max(max(len(l) for l in self.labels), digits + 2)
        head = " " * width + "".join(f" {l:>{width}}" for l in self.labels)
        rows = [
            f"{l:<{width}}" + "".join(f" {cell(x):>{width}}" for x in row)
            for l, row in zip(self.labels, self.values)
        ]
        return "\n".join([head, *rows])


def cohesion_coupling_matrix(g: Graph, p: Partition) -> CohesionCouplingMatrix:
    st = link_stats(g, p)
    s = np.asarray(st.sizes, dtype=float)
    pairs = s * (s - 1) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        coh = np.where(pairs > 0, np.asarray(st.internal) / pairs, 0.0)
    vals = st.cross / np.outer(s, s)
    np.fill_diagonal(vals, coh)
    return CohesionCouplingMatrix(tuple(p.cell_names()), vals)


def sorted_ratio_series(mat: CohesionCouplingMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(cohesion descending, upper-triangle coupling descending)."""
    v = mat.values
    coh = np.sort(np.diagonal(v))[::-1]
    iu = np.triu_indices(v.shape[0], 1)
    cpl = np.sort(v[iu])[::-1]
    return coh, cpl


def series_csv(coh: np.ndarray, cpl: np.ndarray) -> str:
    """Two plot-ready columns; the shorter one is padded with blanks."""
    lines = ["rank,cohesion,coupling"]
    for k in range(max(len(coh), len(cpl))):
        a = f"{coh[k]:.6f}" if k < len(coh) else ""
        b = f"{cpl[k]:.6f}" if k < len(cpl) else ""
        lines.append(f"{k + 1},{a},{b}")
    return "\n".join(lines) + "\n"
