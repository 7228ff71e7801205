"""Goodness measures for partitions of a misfit graph.

Every measure is evaluated on the subgraph induced by the partition's
universe: ``m`` is the number of vertices in the universe and ``l`` (or
``total``) the number of links with both ends in it.

Besides the public per-partition functions there are two count-based
evaluators used by the searches:

* :func:`bipartition_values` works on arrays of ``(a, la, lb)`` and
  covers every measure on two cells;
* :func:`aggregate_values` works on per-partition sums of cell
  statistics and covers the any-partition measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Literal, Mapping

import numpy as np

from .graph import Graph, LinkStats, Partition, PartitionError, link_stats


@dataclass(frozen=True)
class MeasureSpec:
    identifier: str
    direction: Literal["minimize", "maximize"]
    arity: Literal["bipartition", "any"]
    title: str

    @property
    def sign(self) -> float:
        """Multiply a value by this to get a quantity to minimize."""
        return 1.0 if self.direction == "minimize" else -1.0


MEASURES: dict[str, MeasureSpec] = {
    s.identifier: s
    for s in (
        MeasureSpec("h2-actual", "minimize", "bipartition", "HIDECS2-Actual (INFO)"),
        MeasureSpec("h2-decomp", "minimize", "bipartition", "HIDECS2-Decomp (SCORE)"),
        MeasureSpec("h2-notes", "minimize", "any", "HIDECS2-Notes (R)"),
        MeasureSpec("h2-rpg", "minimize", "bipartition", "HIDECS2-rpg (RSCORE)"),
        MeasureSpec("h3-bldup", "minimize", "any", "HIDECS3-BLDUP (INFO2)"),
        MeasureSpec("h3-stabl", "maximize", "any", "HIDECS3-STABL (EXP)"),
        MeasureSpec("newman-q", "maximize", "any", "Newman-Girvan modularity (Q)"),
    )
}


def get_measure(identifier: str) -> MeasureSpec:
    try:
        return MEASURES[identifier]
    except KeyError:
        raise ValueError(f"unknown measure {identifier!r}; choose from {', '.join(MEASURES)}") from None


@dataclass(frozen=True)
class MeasureValue:
    measure: str
    value: float
    intermediates: Mapping[str, float] = field(default_factory=dict)
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value

    def display(self) -> str:
        return format_value(self.measure, self.value)


def round_half_away(x: float, digits: int) -> float:
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def display_digits(measure: str) -> int:
    return 3 if measure == "newman-q" else 2


def format_value(measure: str, value: float) -> str:
    d = display_digits(measure)
    return f"{round_half_away(value, d):.{d}f}"


def _signed_square(nom: float, denom: float) -> float:
    return math.copysign(nom * nom / denom, nom) if nom else 0.0


def _stats(g: Graph, p: Partition, two_cells: bool) -> LinkStats:
    if two_cells and len(p.cells) != 2:
        raise PartitionError(f"measure needs a bipartition, got {len(p.cells)} cells")
    return link_stats(g, p)


# ---------------------------------------------------------------------------
# Bipartition measures
# ---------------------------------------------------------------------------

def hidecs2_actual(g: Graph, p: Partition) -> MeasureValue:
    st = _stats(g, p, True)
    nbit, total = st.m, st.total
    nsq1 = nbit * (nbit - 1) / 2
    m, n = st.sizes
    mn = m * n
    rr = st.cut
    nom = rr - (total / nsq1) * mn
    denom = mn * (nsq1 - mn)
    inter = {"nbit": nbit, "total": total, "nsq1": nsq1, "m": m, "n": n, "RR": rr, "nom": nom, "denom": denom}
    if denom == 0:
        return MeasureValue("h2-actual", 0.0, inter | {"STR": 0.0, "INFO": 0.0}, True)
    s = nom / math.sqrt(denom)
    info = _signed_square(nom, denom)
    return MeasureValue("h2-actual", info, inter | {"STR": s, "INFO": info})


def hidecs2_decomp(g: Graph, p: Partition) -> MeasureValue:
    st = _stats(g, p, True)
    m, l = st.m, st.total
    a, b = st.sizes
    half = m * (m - 1) / 2
    cut = l - st.internal[0] - st.internal[1]
    nom = cut * half - l * a * b
    denom = a * b * (half - a * b)
    inter = {"m": m, "l": l, "a": a, "b": b, "la": st.internal[0], "lb": st.internal[1], "nom": nom, "denom": denom}
    if denom == 0:
        return MeasureValue("h2-decomp", 0.0, inter | {"SCORE": 0.0}, True)
    score = nom / math.sqrt(denom)
    return MeasureValue("h2-decomp", score, inter | {"SCORE": score})


def hidecs2_rpg(g: Graph, p: Partition) -> MeasureValue:
    """Cohesion/coupling score; ``l`` is the actual link count and ``m_ab = a*b``."""
    st = _stats(g, p, True)
    a, b = st.sizes
    la, lb = st.internal
    lab = st.total - la - lb
    ma, mb, mab = a * (a - 1) / 2, b * (b - 1) / 2, a * b
    f1 = 0.0 if ma == 0 else 1 - la / ma
    f2 = 0.0 if mab == 0 else lab / mab
    f3 = 0.0 if mb == 0 else 1 - lb / mb
    f4 = 1 - ((a - b) / (a + b)) ** 2
    rscore = (f1 + f2 + f3) / f4
    inter = {"a": a, "b": b, "la": la, "lb": lb, "lab": lab, "ma": ma, "mb": mb, "mab": mab,
             "f1": f1, "f2": f2, "f3": f3, "f4": f4, "RSCORE": rscore}
    return MeasureValue("h2-rpg", rscore, inter)


# ---------------------------------------------------------------------------
# Any-partition measures
# ---------------------------------------------------------------------------

def _pair_size_sum(sizes) -> int:
    total = sum(sizes)
    return (total * total - sum(s * s for s in sizes)) // 2


def hidecs2_notes(g: Graph, p: Partition) -> MeasureValue:
    st = link_stats(g, p)
    m, l = st.m, st.total
    half = m * (m - 1) / 2
    ss = _pair_size_sum(st.sizes)
    nom = half * st.cut - l * ss
    denom = ss * (half - ss)
    inter = {"m": m, "l": l, "cut": st.cut, "sum_SaSb": ss, "nom": nom, "denom": denom}
    if denom <= 0:
        return MeasureValue("h2-notes", 0.0, inter | {"R": 0.0}, True)
    r = nom / math.sqrt(denom)
    return MeasureValue("h2-notes", r, inter | {"R": r})


def hidecs3_bldup(g: Graph, p: Partition) -> MeasureValue:
    st = link_stats(g, p)
    nbit, total = st.m, st.total
    nsq1 = nbit * (nbit - 1) / 2
    ss = _pair_size_sum(st.sizes)
    inter = {"nbit": nbit, "total": total, "nsq1": nsq1, "cut": st.cut, "sum_SaSb": ss}
    denom = ss * (nsq1 - ss)
    if nsq1 == 0 or denom <= 0:
        return MeasureValue("h3-bldup", 0.0, inter | {"nom": 0.0, "denom": denom, "STR2": 0.0, "INFO2": 0.0}, True)
    nom = st.cut - (total / nsq1) * ss
    info2 = _signed_square(nom, denom)
    return MeasureValue(
        "h3-bldup", info2, inter | {"nom": nom, "denom": denom, "STR2": nom / math.sqrt(denom), "INFO2": info2}
    )


def _stabl_cell_weight(s: int) -> float:
    return (s * (s - 1) + 1) / 2


def hidecs3_stabl(g: Graph, p: Partition) -> MeasureValue:
    st = link_stats(g, p)
    m, l = st.m, st.total
    scale = m * (m - 1) / (2 * l) if l else 0.0
    nom = sum(li * scale - _stabl_cell_weight(s) for li, s in zip(st.internal, st.sizes))
    denom = sum(_stabl_cell_weight(s) * 2.0 ** (-2 * s) for s in st.sizes)
    exp = _signed_square(nom, denom)
    return MeasureValue("h3-stabl", exp, {"m": m, "l": l, "nom": nom, "denom": denom, "EXP": exp})


def newman_q(g: Graph, p: Partition) -> MeasureValue:
    st = link_stats(g, p)
    l = st.total
    if l == 0:
        return MeasureValue("newman-q", 0.0, {"l": 0, "Q": 0.0}, True)
    e = st.cross / (2 * l)
    np.fill_diagonal(e, np.asarray(st.internal) / l)
    a = e.sum(axis=1)
    q = float(np.sum(np.diagonal(e) - a * a))
    inter: dict[str, float] = {"l": l, "Q": q}
    for k in range(len(a)):
        inter[f"e_{k + 1}{k + 1}"] = float(e[k, k])
        inter[f"a_{k + 1}"] = float(a[k])
    return MeasureValue("newman-q", q, inter)


MEASURE_FUNCTIONS: dict[str, Callable[[Graph, Partition], MeasureValue]] = {
    "h2-actual": hidecs2_actual,
    "h2-decomp": hidecs2_decomp,
    "h2-notes": hidecs2_notes,
    "h2-rpg": hidecs2_rpg,
    "h3-bldup": hidecs3_bldup,
    "h3-stabl": hidecs3_stabl,
    "newman-q": newman_q,
}


def evaluate(measure: str, g: Graph, p: Partition) -> MeasureValue:
    get_measure(measure)
    return MEASURE_FUNCTIONS[measure](g, p)


def expected_cut_links(m: int, total: int, a: int, b: int) -> float:
    """Expected number of links cut by an a/b split: ``(total/nsq1) * a * b``."""
    if m < 2:
        raise ValueError("need at least two vertices")
    if a + b != m or a < 0 or b < 0:
        raise ValueError("a + b must equal m")
    nsq1 = m * (m - 1) / 2
    if not 0 <= total <= nsq1:
        raise ValueError("total must lie in [0, m(m-1)/2]")
    return total / nsq1 * a * b


# ---------------------------------------------------------------------------
# Vectorized count-based evaluators (search inner loops)
# ---------------------------------------------------------------------------

def _sq_signed(nom: np.ndarray, denom: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sign(nom) * nom * nom / denom
    return np.where(denom > 0, out, 0.0)


def _ratio(nom: np.ndarray, denom: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = nom / np.sqrt(denom)
    return np.where(denom > 0, out, 0.0)


def bipartition_values(measure: str, m: int, l: int, a, la, lb) -> np.ndarray:
    """Measure values for bipartitions given first-cell size and internal link counts."""
    a = np.asarray(a, dtype=float)
    la = np.asarray(la, dtype=float)
    lb = np.asarray(lb, dtype=float)
    b = m - a
    cut = l - la - lb
    half = m * (m - 1) / 2
    ab = a * b
    if measure == "h2-actual":
        nom = cut - (l / half) * ab if half else np.zeros_like(ab)
        return _sq_signed(nom, ab * (half - ab))
    if measure in ("h2-decomp", "h2-notes"):
        return _ratio(cut * half - l * ab, ab * (half - ab))
    if measure == "h3-bldup":
        nom = cut - (l / half) * ab if half else np.zeros_like(ab)
        return _sq_signed(nom, ab * (half - ab))
    if measure == "h2-rpg":
        ma, mb = a * (a - 1) / 2, b * (b - 1) / 2
        with np.errstate(divide="ignore", invalid="ignore"):
            f1 = np.where(ma > 0, 1 - la / ma, 0.0)
            f3 = np.where(mb > 0, 1 - lb / mb, 0.0)
            f2 = np.where(ab > 0, cut / ab, 0.0)
        f4 = 1 - ((a - b) / m) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(f4 > 0, (f1 + f2 + f3) / f4, np.inf)
    if measure == "h3-stabl":
        scale = m * (m - 1) / (2 * l) if l else 0.0
        wa, wb = (a * (a - 1) + 1) / 2, (b * (b - 1) + 1) / 2
        nom = (la + lb) * scale - wa - wb
        denom = wa * 4.0 ** (-a) + wb * 4.0 ** (-b)
        return _sq_signed(nom, denom)
    if measure == "newman-q":
        if l == 0:
            return np.zeros_like(a)
        da, db = 2 * la + cut, 2 * lb + cut
        return (la + lb) / l - (da * da + db * db) / (4.0 * l * l)
    raise ValueError(f"unknown measure {measure!r}")


@dataclass
class CellAggregates:
    """Sums over cells of the statistics the any-partition measures need."""

    sum_l: np.ndarray       # Σ l_i
    sum_s2: np.ndarray      # Σ s_i²
    sum_w: np.ndarray       # Σ (s_i(s_i-1)+1)/2
    sum_w4: np.ndarray      # Σ (s_i(s_i-1)+1)/2 · 4^(-s_i)
    sum_d2: np.ndarray      # Σ D_i², D_i = degree sum of cell i


def cell_terms(s, l_in, d):
    s = np.asarray(s, dtype=float)
    w = (s * (s - 1) + 1) / 2
    return np.asarray(l_in, dtype=float), s * s, w, w * 4.0 ** (-s), np.asarray(d, dtype=float) ** 2


def aggregate_values(measure: str, m: int, l: int, agg: CellAggregates) -> np.ndarray:
    half = m * (m - 1) / 2
    cut = l - agg.sum_l
    ss = (m * m - agg.sum_s2) / 2
    if measure == "h2-notes":
        return _ratio(half * cut - l * ss, ss * (half - ss))
    if measure == "h3-bldup":
        if half == 0:
            return np.zeros_like(cut)
        return _sq_signed(cut - (l / half) * ss, ss * (half - ss))
    if measure == "h3-stabl":
        scale = half / l if l else 0.0
        return _sq_signed(agg.sum_l * scale - agg.sum_w, agg.sum_w4)
    if measure == "newman-q":
        if l == 0:
            return np.zeros_like(cut)
        return agg.sum_l / l - agg.sum_d2 / (4.0 * l * l)
    raise ValueError(f"measure {measure!r} is bipartition-only")
