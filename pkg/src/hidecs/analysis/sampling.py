"""Monte Carlo estimates of the cut count under random-graph null models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph
from ..rng import SplitMix64, numpy_generator


@dataclass(frozen=True)
class CutStats:
    model: str
    samples: int
    seed: int
    mean: float
    variance: float             # sample variance (ddof = 1)
    analytic_mean: float        # (total/nsq1) * a * b
    exact_variance: float       # variance under the uniform fixed-link-count model
    formula_mn: float           # a*b*(nsq1 - a*b), the expression that appears in the denominator


def _worker_seeds(seed: int, workers: int) -> list[int]:
    rng = SplitMix64(seed)
    return [rng.derive() for _ in range(workers)]


def _split(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (k < extra) for k in range(workers)]


def hypergeometric_variance(N: int, K: int, n: int) -> float:
    if N <= 1:
        return 0.0
    return n * (K / N) * (1 - K / N) * (N - n) / (N - 1)


def estimate_cut_stats(
    m: int,
    total: int,
    a: int,
    samples: int,
    seed: int,
    *,
    graph: Graph | None = None,
    workers: int = 1,
) -> CutStats:
    """Mean and variance of the cut count RR for an a/(m-a) split.

    Default model: a uniformly random graph with exactly ``total`` links
    on ``m`` vertices, so RR is hypergeometric.  With ``graph`` given, the
    graph is fixed and the a-set is drawn uniformly instead.
    """
    if m < 2 or not 0 < a < m:
        raise ValueError("need m >= 2 and 0 < a < m")
    nsq1 = m * (m - 1) // 2
    if not 0 <= total <= nsq1:
        raise ValueError("total must lie in [0, m(m-1)/2]")
    if samples < 1 or workers < 1:
        raise ValueError("samples and workers must be positive")
    if graph is not None and (graph.m != m or graph.total != total):
        raise ValueError("graph does not match m and total")
    ab = a * (m - a)
    s1 = s2 = 0.0
    for wseed, n in zip(_worker_seeds(seed, workers), _split(samples, workers)):
        if n == 0:
            continue
        rng = numpy_generator(wseed)
        if graph is None:
            rr = rng.hypergeometric(ab, nsq1 - ab, total, size=n).astype(float) if total else np.zeros(n)
        else:
            rr = _fixed_graph_cuts(graph, a, n, rng)
        s1 += rr.sum()
        s2 += (rr * rr).sum()
    mean = s1 / samples
    var = (s2 - samples * mean * mean) / (samples - 1) if samples > 1 else 0.0
    return CutStats(
        model="uniform" if graph is None else "fixed-graph",
        samples=samples,
        seed=seed,
        mean=mean,
        variance=max(var, 0.0),
        analytic_mean=total / nsq1 * ab,
        exact_variance=hypergeometric_variance(nsq1, ab, total),
        formula_mn=float(ab * (nsq1 - ab)),
    )


def _fixed_graph_cuts(g: Graph, a: int, n: int, rng: np.random.Generator, chunk: int = 4096) -> np.ndarray:
    A = g.adj.astype(np.float64)
    out = np.empty(n)
    for lo in range(0, n, chunk):
        k = min(chunk, n - lo)
        keys = rng.random((k, g.m))
        side = (np.argsort(keys, axis=1) < a).astype(np.float64)
        # cut = links with exactly one end in the a-set
        deg_in = side @ A
        out[lo:lo + k] = (deg_in * (1 - side)).sum(axis=1)
    return out
