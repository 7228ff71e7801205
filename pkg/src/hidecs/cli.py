"""Command-line interface: ``hidecs <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .analysis import (
    cohesion_coupling_matrix,
    estimate_cut_stats,
    layout_layers,
    pair_partitions,
    series_csv,
    simulate_homeostasis,
    sorted_ratio_series,
)
from .datasets import dataset_names, load_dataset, reference_partitions
from .export import export_dot, semilattice_json, tree_json
from .graph import (
    Graph,
    Partition,
    PartitionError,
    graph_to_table,
    induced_subgraph,
    parse_interactions,
    read_partition,
    symmetrize,
)
from .measures import MEASURES, evaluate, format_value
from .replicate import REGISTRY, replicate_suite
from .search import (
    DecompositionTree,
    SearchConfig,
    bisect_best,
    bldup_agglomerate,
    decompose_topdown,
    maximal_cliques,
    recompose_semilattice,
    stabl_search,
)


class CliError(Exception):
    pass


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(args) -> Graph:
    if getattr(args, "graph", None):
        path = Path(args.graph)
        if not path.exists():
            raise CliError(f"no such file: {path}")
        g, _ = symmetrize(parse_interactions(path.read_text()))
    else:
        g = load_dataset(args.dataset).graph
    restrict = getattr(args, "restrict", None)
    if restrict:
        if args.dataset != "indian-village" or getattr(args, "graph", None):
            raise CliError("--restrict names sets of the indian-village reference decomposition")
        try:
            g = induced_subgraph(g, reference_partitions().cell(restrict))
        except KeyError as exc:
            raise CliError(str(exc)) from None
    return g


def _load_partition(spec: str, g: Graph, restricted: bool = False) -> Partition:
    named = reference_partitions().named
    if spec in named:
        p = named[spec]
    else:
        path = Path(spec)
        if not path.exists():
            raise CliError(f"{spec!r} is neither a named partition ({', '.join(named)}) nor a file")
        p = read_partition(path)
    vs = set(g.ids)
    if not restricted and not p.universe <= vs:
        raise CliError(f"partition escapes the graph: {sorted(p.universe - vs)[:10]}")
    if p.universe != vs:
        # restricted graphs: keep the cells' parts that fall inside
        cells = [c & vs for c in p.cells]
        names = [n for n, c in zip(p.cell_names(), cells) if c]
        p = Partition.of([c for c in cells if c], names=names)
    return p


def _add_graph_args(sp, restrict: bool = True) -> None:
    sp.add_argument("--dataset", default="indian-village", choices=dataset_names())
    sp.add_argument("--graph", help="interaction file to use instead of an embedded dataset")
    if restrict:
        sp.add_argument("--restrict", metavar="SET", help="evaluate on the subgraph induced by a reference set (e.g. C)")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    if args.graph:
        raw = parse_interactions(Path(args.graph).read_text())
    else:
        raw = load_dataset(args.dataset).raw
    g, rep = symmetrize(raw, promote=args.promote)
    lines = [
        f"vertices: {g.m}",
        f"directed entries: {raw.directed_count}",
        f"links: {g.total}",
        f"one-way entries: {len(rep)}",
    ]
    if rep.per_vertex:
        top = max(rep.per_vertex.items(), key=lambda kv: (kv[1], -kv[0]))
        lines.append(f"most one-way entries: vertex {top[0]} ({top[1]})")
    lines += rep.arrow_lines() if args.arrows else rep.lines()
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cfg(args, **extra) -> SearchConfig:
    return SearchConfig(
        measure=args.measure,
        latis=args.latis,
        seed=args.seed,
        max_depth=args.max_depth,
        min_size=args.min_size,
        tie_policy=args.tie_policy,
        tie_branch_cap=args.tie_cap,
        restart_ties=args.restart_ties,
        **extra,
    )


def _tree_text(t: DecompositionTree, measure: str) -> list[str]:
    out = []
    for depth, node in t.walk():
        val = "" if node.value is None else f"  [{format_value(measure, node.value)}]"
        tag = "" if node.children is not None else f"  ({node.leaf_reason})"
        out.append("  " * depth + " ".join(map(str, sorted(node.members))) + val + tag)
    return out


DEFAULT_MEASURE = {"topdown": "h2-decomp", "bisect": "h2-decomp", "bldup": "h3-bldup", "stabl": "h3-stabl"}


def cmd_decompose(args) -> int:
    g = _load_graph(args)
    args.measure = args.measure or DEFAULT_MEASURE[args.algo]
    header = [f"# seed: {args.seed}", f"# algorithm: {args.algo}", f"# measure: {args.measure}"]
    if args.algo == "topdown":
        t = decompose_topdown(g, _cfg(args))
        if args.format == "json":
            _emit(args, tree_json(t, {"seed": args.seed, "measure": args.measure}))
            return 0
        lines = header + [f"top split: {format_value(args.measure, t.value)}" if t.value is not None else "top split: none"]
        lines += _tree_text(t, args.measure)
    elif args.algo == "bisect":
        r = bisect_best(g, None, _cfg(args))
        lines = header + [f"value: {format_value(args.measure, r.value)}", f"distinct local optima: {r.distinct_optima}"]
        lines += [" ".join(map(str, sorted(c))) for c in r.partition.cells]
    elif args.algo == "bldup":
        r = bldup_agglomerate(g, _cfg(args))
        lines = header + [f"value: {format_value(args.measure, r.value)}", f"cells: {len(r.partition)}"]
        lines += [" ".join(map(str, sorted(c))) for c in r.partition.cells]
    else:
        r = stabl_search(g, _cfg(args))
        lines = header + [
            f"value: {format_value(args.measure, r.value)}",
            f"cells: {len(r.partition)}",
            "tie trace: " + " ".join(map(str, r.tie_trace)),
        ]
        if r.truncated:
            lines.append("# exhaustive tie search hit its node budget")
        lines += [" ".join(map(str, sorted(c))) for c in r.partition.cells]
    if args.format == "json":
        doc = {"kind": "partition", "seed": args.seed, "algorithm": args.algo, "measure": args.measure,
               "value": r.value, "sets": [sorted(c) for c in r.partition.cells]}
        _emit(args, json.dumps(doc, indent=1) + "\n")
        return 0
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_eval(args) -> int:
    g = _load_graph(args)
    p = _load_partition(args.partition, g, bool(args.restrict))
    measures = list(MEASURES) if args.measure == "all" else [args.measure]
    lines = []
    for m in measures:
        if MEASURES[m].arity == "bipartition" and len(p) != 2:
            if args.measure == "all":
                continue
            raise CliError(f"{m} needs a 2-cell partition; {args.partition} has {len(p)} cells")
        mv = evaluate(m, g, p)
        text = f"{m}: {format_value(m, mv.value)}" + ("  (degenerate)" if mv.degenerate else "")
        lines.append(text)
        if args.verbose:
            lines += [f"  {k} = {v:.10g}" for k, v in mv.intermediates.items()]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_cliques(args) -> int:
    g = _load_graph(args)
    cl = maximal_cliques(g)
    lines = [f"maximal cliques: {len(cl)}"] + [" ".join(map(str, c)) for c in cl]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_recompose(args) -> int:
    g = _load_graph(args)
    s = recompose_semilattice(g, maximal_cliques(g))
    _emit(args, semilattice_json(s, {"dataset": args.graph or args.dataset}))
    return 0


def cmd_estimate(args) -> int:
    graph = None
    if args.model == "fixed-graph":
        graph = _load_graph(args)
        m, total = graph.m, graph.total
    else:
        if args.m is None or args.total is None:
            raise CliError("--m and --total are required for the uniform model")
        m, total = args.m, args.total
    st = estimate_cut_stats(m, total, args.a, args.samples, args.seed, graph=graph, workers=args.workers)
    lines = [
        f"# seed: {args.seed}",
        f"model: {st.model}",
        f"m: {m}  total: {total}  split: {args.a}/{m - args.a}  samples: {st.samples}",
        f"mean: {st.mean:.6f}",
        f"analytic mean: {st.analytic_mean:.6f}",
        f"variance: {st.variance:.6f}",
        f"exact variance (uniform model): {st.exact_variance:.6f}",
        f"mn(nsq1-mn): {st.formula_mn:.0f}",
    ]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_simulate(args) -> int:
    if args.complete:
        g = Graph.complete(args.complete)
    elif args.isolated:
        g = Graph.empty(args.isolated)
    else:
        g = _load_graph(args)
    st = simulate_homeostasis(g, args.trials, args.seed, workers=args.workers)
    lines = [f"# seed: {args.seed}", f"lights: {g.m}  links: {g.total}  trials: {st.trials}",
             f"mean steps to all-off: {st.mean:.4f} ± {st.stderr:.4f}", f"longest trial: {st.max_steps}"]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_pair(args) -> int:
    g = _load_graph(args)
    pa, pb = _load_partition(args.a, g), _load_partition(args.b, g)
    pr = pair_partitions(pa, pb)
    na, nb = pa.cell_names(), pb.cell_names()
    lines = [f"{na[i]} <-> {nb[j]} ({k} in common)" for i, j, k in pr.pairs]
    lines.append(f"total overlap: {pr.total_overlap}")
    if pr.unpaired_a:
        lines.append("unpaired in a: " + ", ".join(na[i] for i in pr.unpaired_a))
    if pr.unpaired_b:
        lines.append("unpaired in b: " + ", ".join(nb[j] for j in pr.unpaired_b))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_matrix(args) -> int:
    g = _load_graph(args)
    M = cohesion_coupling_matrix(g, _load_partition(args.partition, g, bool(args.restrict)))
    if args.series:
        _emit(args, series_csv(*sorted_ratio_series(M)))
    else:
        _emit(args, M.to_text() + "\n")
    return 0


def cmd_replicate(args) -> int:
    criteria = None
    if args.criteria:
        criteria = {int(x) for x in args.criteria.split(",")}
    rep = replicate_suite(
        args.scope, args.seed, criteria,
        hidecs3_graph=args.hidecs3_graph, graph_a=args.graph_a, quick=args.quick,
    )
    _emit(args, "\n".join(rep.lines()) + "\n")
    return 1 if rep.deterministic_failed else 0


def cmd_export_dot(args) -> int:
    if args.tree:
        doc = json.loads(Path(args.tree).read_text())
        structure = DecompositionTree.from_json(doc.get("tree", doc))
    else:
        g = _load_graph(args)
        structure = recompose_semilattice(g, maximal_cliques(g))
    layout = layout_layers(structure)
    dot = export_dot(structure, layout)
    if not args.out:
        sys.stdout.write(f"// crossings: {layout.crossings} (initial {layout.initial_crossings})\n")
    _emit(args, dot)
    return 0


def cmd_export_data(args) -> int:
    if args.what == "table":
        b = load_dataset(args.dataset)
        text = b.raw.to_text([b.provenance])
    elif args.what == "symmetric":
        text = graph_to_table(load_dataset(args.dataset).graph).to_text(["symmetrized (both directions listed)"])
    elif args.what == "requirements":
        b = load_dataset(args.dataset)
        text = json.dumps({"requirements": {str(k): v for k, v in b.requirements.items()},
                           "groups": [{"name": n, "ids": list(ids)} for n, ids in b.groups]}, indent=1, ensure_ascii=False) + "\n"
    else:
        named = reference_partitions().named
        text = json.dumps({k: p.to_json() for k, p in named.items()}, indent=1, ensure_ascii=False) + "\n"
    _emit(args, text)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hidecs", description="HIDECS decomposition measures and searches")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write output to this file")
        return sp

    sp = add("check", cmd_check, "audit an interaction table (one-way entries, link count)")
    _add_graph_args(sp, restrict=False)
    sp.add_argument("--arrows", action="store_true", help="print one-way entries grouped with arrows")
    sp.add_argument("--promote", action="store_true", help="keep one-way entries as links (experimental)")

    sp = add("decompose", cmd_decompose, "run a decomposition search")
    _add_graph_args(sp)
    sp.add_argument("--algo", choices=["topdown", "bisect", "bldup", "stabl"], default="topdown")
    sp.add_argument("--measure", choices=list(MEASURES), help="default depends on --algo")
    sp.add_argument("--latis", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-depth", type=int)
    sp.add_argument("--min-size", type=int, default=3, help="smallest cell that may still be split")
    sp.add_argument("--tie-policy", choices=["first-canonical", "exhaustive", "seeded-random"])
    sp.add_argument("--tie-cap", type=int, default=100_000)
    sp.add_argument("--restart-ties", choices=["first-restart", "canonical"], default="first-restart")
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("eval", cmd_eval, "evaluate a measure on a partition")
    _add_graph_args(sp)
    sp.add_argument("--partition", required=True, help="named partition or partition file")
    sp.add_argument("--measure", choices=list(MEASURES) + ["all"], default="all")
    sp.add_argument("--verbose", action="store_true", help="print intermediates")

    sp = add("cliques", cmd_cliques, "list maximal cliques")
    _add_graph_args(sp)

    sp = add("recompose", cmd_recompose, "build the clique overlap semilattice (JSON)")
    _add_graph_args(sp)

    sp = add("estimate", cmd_estimate, "sample the cut count of a fixed split")
    _add_graph_args(sp)
    sp.add_argument("--model", choices=["uniform", "fixed-graph"], default="uniform")
    sp.add_argument("--m", type=int)
    sp.add_argument("--total", type=int)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("simulate", cmd_simulate, "homeostasis lights simulation")
    _add_graph_args(sp)
    sp.add_argument("--complete", type=int, metavar="N", help="use the complete graph on N lights")
    sp.add_argument("--isolated", type=int, metavar="N", help="use N unconnected lights")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("pair", cmd_pair, "pair the cells of two partitions by overlap")
    _add_graph_args(sp, restrict=False)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = add("matrix", cmd_matrix, "cohesion/coupling matrix of a partition")
    _add_graph_args(sp)
    sp.add_argument("--partition", required=True)
    sp.add_argument("--series", action="store_true", help="emit sorted cohesion and coupling series as CSV")

    sp = add("replicate", cmd_replicate, "run the reproduction checks")
    sp.add_argument("--scope", choices=["deterministic", "all"], default="deterministic")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--criteria", help=f"comma-separated subset of 1..{len(REGISTRY)}")
    sp.add_argument("--hidecs3-graph", type=Path, help="transcribed interaction file of the HIDECS3 example graph")
    sp.add_argument("--graph-a", type=Path, help="transcribed interaction file of Graph A")
    sp.add_argument("--quick", action="store_true", help="smaller sample counts")

    sp = add("export-dot", cmd_export_dot, "DOT drawing of a tree file or a clique semilattice")
    _add_graph_args(sp)
    sp.add_argument("--tree", help="tree JSON written by 'decompose --format json'")

    sp = add("export-data", cmd_export_data, "print embedded data")
    sp.add_argument("--dataset", default="indian-village", choices=dataset_names())
    sp.add_argument("what", choices=["table", "symmetric", "requirements", "partitions"])
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, PartitionError, ValueError, FileNotFoundError, KeyError) as exc:
        print(f"hidecs: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
