"""DOT and JSON serializations of trees and semilattices."""

from __future__ import annotations

import json

from .analysis.layout import LayeredLayout, as_layered, layout_layers
from .search.cliques import Semilattice
from .search.topdown import DecompositionTree


def _label(members: tuple[int, ...], width: int = 8) -> str:
    rows = [" ".join(map(str, members[i:i + width])) for i in range(0, len(members), width)]
    return "\\n".join(rows)


def export_dot(structure: DecompositionTree | Semilattice, layout: LayeredLayout | None = None, name: str = "hidecs") -> str:
    """A DOT digraph with one ``rank=same`` group per level, in layout order."""
    st = as_layered(structure)
    layout = layout or layout_layers(st)
    if sorted(n for l in layout.order for n in l) != sorted(n for l in st.levels for n in l):
        raise ValueError("layout does not match the structure")
    out = [f"digraph {name} {{", "  node [shape=box, fontsize=10];"]
    if isinstance(structure, Semilattice):
        out.append("  rankdir=BT;")
        out.append(f'  // {structure.construction}')
    for k, level in enumerate(layout.order):
        out.append(f"  subgraph level{k} {{")
        out.append("    rank=same;")
        for n in level:
            out.append(f'    n{n} [label="{_label(st.labels[n])}"];')
        out.append("  }")
    for a, b in sorted(st.arcs):
        out.append(f"  n{a} -> n{b};")
    out.append("}")
    return "\n".join(out) + "\n"


def tree_json(t: DecompositionTree, meta: dict | None = None) -> str:
    doc = {"kind": "decomposition-tree", **(meta or {}), "tree": t.to_json()}
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def semilattice_json(s: Semilattice, meta: dict | None = None) -> str:
    doc = {"kind": "semilattice", **(meta or {}), **s.to_json()}
    return json.dumps(doc, indent=1) + "\n"
