"""A constructed instance where greedy bisection misplaces a cohesive vertex.

Eight triangles L0..L3 and R0..R3; consecutive clusters on each side are
joined in a ring by one link.  Vertex x links to all three members of L2
and to one member of every R cluster, so the first cut sees three links
toward L and four toward R, while x only belongs cohesively with L2.
"""

from __future__ import annotations

from ..graph import Graph


def build_counterexample() -> tuple[Graph, int, dict[str, tuple[int, ...]]]:
    clusters: dict[str, tuple[int, ...]] = {}
    links: list[tuple[int, int]] = []
    v = 1
    for side in "LR":
        for k in range(4):
            tri = (v, v + 1, v + 2)
            clusters[f"{side}{k}"] = tri
            links += [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])]
            v += 3
        for k in range(4):
            a, b = clusters[f"{side}{k}"], clusters[f"{side}{(k + 1) % 4}"]
            links.append((a[2], b[0]))
    x = v
    links += [(x, u) for u in clusters["L2"]]
    links += [(x, clusters[f"R{k}"][1]) for k in range(4)]
    labels = {u: name for name, tri in clusters.items() for u in tri} | {x: "x"}
    return Graph.from_links(range(1, x + 1), links, labels), x, clusters
