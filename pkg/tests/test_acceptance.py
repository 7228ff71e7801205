"""Acceptance criteria 1-14 at their stated tolerances.

Each test records one pass/fail line that is printed in the terminal summary.
Reference constants below are the published values.
"""

from __future__ import annotations

import pytest

from conftest import ACCEPTANCE
from hidecs.analysis import cohesion_coupling_matrix, estimate_cut_stats, simulate_homeostasis
from hidecs.analysis.matrix import format_ratio
from hidecs.datasets import load_dataset, reference_partitions
from hidecs.graph import Graph, Partition, induced_subgraph
from hidecs.measures import hidecs2_decomp, hidecs2_notes, newman_q
from hidecs.replicate import oracle_suite, property_suite, replicate_suite, run_seeds
from hidecs.search import SearchConfig, bisect_best, build_counterexample, decompose_topdown, stabl_search

SEED = 1

ONE_WAY, ONE_WAY_33, LINKS, VERTICES = 50, 30, 1383, 141
C1C2 = -89.60
OPTIONS = {"AB|CD": -645.04, "AC|BD": -434.40, "AD|BC": -562.65}
PAIRS = {"AB": -197.83, "AC": -257.00, "AD": -197.98, "BC": -341.70, "BD": -345.84, "CD": -297.75}
NOTES_CA = {"ca-pi1": -434.40, "ca-pi2": -945.57, "ca-pi4": -1072.62}
NOTES_RPG = {"rpg1-pi4": -1182.20, "rpg2-pi4": -1089.22}
MATRIX_SPOTS = {("A1", "A1"): 0.444, ("A2", "A2"): 0.778, ("B3", "B3"): 0.682, ("A1", "A2"): 0.173, ("D2", "D3"): 0.205}
PRINTED_MATRIX = """
.444 .173 .095 .210 .063 .056 .061 .092 .052 .074 .037 .009
.173 .778 .238 .123 .079 .231 .131 .029 .046 .111 .176 .077
.095 .238 .381 .063 .061 .179 .052 .037 .025 .155 .095 .099
.210 .123 .063 .500 .222 .231 .172 .116 .098 .065 .083 .017
.063 .079 .061 .222 .476 .226 .130 .193 .084 .012 .036 .055
.056 .231 .179 .231 .226 .682 .341 .058 .059 .076 .125 .051
.061 .131 .052 .172 .130 .341 .618 .087 .032 .068 .061 .133
.092 .029 .037 .116 .193 .058 .087 .447 .184 .058 .174 .064
.052 .046 .025 .098 .084 .059 .032 .184 .353 .034 .142 .113
.074 .111 .155 .065 .012 .076 .068 .058 .034 .576 .292 .141
.037 .176 .095 .083 .036 .125 .061 .174 .142 .292 .576 .205
.009 .077 .099 .017 .055 .051 .133 .064 .113 .141 .205 .385
"""
Q_NEWMAN, Q_CA, Q_RPG1, Q_RPG2 = 0.297, 0.208, 0.193, 0.176
SMALL_MEAN, SMALL_VAR, BIG_VAR, BIG_MN = 7.7778, 2.60, 293.60, 24_354_000
TOP_C, LEAF_LO, LEAF_HI, MIN_TREES = -91.60, -144.68, -136.94, 30
RATIO_LO, RATIO_HI = 3.0, 7.0


@pytest.fixture(scope="module")
def iv():
    return load_dataset("indian-village").graph


@pytest.fixture(scope="module")
def refs():
    return reference_partitions()


def record(n: int, ok: bool, text: str) -> None:
    ACCEPTANCE[n] = (ok, text)
    assert ok, text


def within(x, want, tol):
    return abs(x - want) <= tol


def test_criterion_01_data_audit():
    g, rep = load_dataset("indian-village").symmetrize()
    got = (len(rep), rep.touching(33), g.total, g.m)
    record(1, got == (ONE_WAY, ONE_WAY_33, LINKS, VERTICES),
           f"one-way {got[0]}, touching 33 {got[1]}, links {got[2]}, vertices {got[3]}")


def test_criterion_02_c1_c2_inside_c(iv, refs):
    c = induced_subgraph(iv, refs.letter("C"))
    v = hidecs2_decomp(c, Partition.of([refs.cell("C1"), refs.cell("C2")])).value
    record(2, within(v, C1C2, 0.01), f"h2-decomp C1/C2 in C = {v:.4f} (want {C1C2} ± 0.01)")


def test_criterion_03_option_table(iv, refs):
    L = {k: refs.letter(k) for k in "ABCD"}
    got = {}
    for name in OPTIONS:
        a = L[name[0]] | L[name[1]]
        got[name] = hidecs2_decomp(iv, Partition.of([a, frozenset(iv.ids) - a])).value
    ok = all(within(got[k], OPTIONS[k], 0.01) for k in OPTIONS)
    ok &= got["AB|CD"] < got["AD|BC"] < got["AC|BD"]
    record(3, ok, ", ".join(f"{k} {v:.2f}" for k, v in got.items()) + "; ordering 1 < 3 < 2")


def test_criterion_04_pairwise_unions(iv, refs):
    got = {}
    for pair in PAIRS:
        got[pair] = hidecs2_decomp(iv, Partition.of([refs.letter(pair[0]), refs.letter(pair[1])])).value
    ok = all(within(got[k], PAIRS[k], 0.01) for k in PAIRS)
    record(4, ok, ", ".join(f"{k} {v:.2f}" for k, v in got.items()))


def test_criterion_05_notes_ca(iv, refs):
    got = {k: hidecs2_notes(iv, refs.named[k]).value for k in NOTES_CA}
    ok = all(within(got[k], NOTES_CA[k], 0.01) for k in NOTES_CA)
    record(5, ok, ", ".join(f"{k} {v:.2f}" for k, v in got.items()))


def test_criterion_06_notes_rpg(iv, refs):
    got = {k: hidecs2_notes(iv, refs.named[k]).value for k in NOTES_RPG}
    ok = all(within(got[k], NOTES_RPG[k], 0.01) for k in NOTES_RPG)
    record(6, ok, ", ".join(f"{k} {v:.2f}" for k, v in got.items()))


def test_criterion_07_matrix(iv, refs):
    M = cohesion_coupling_matrix(iv, refs.named["ca-pi4"])
    spots = {k: M.coupling(*k) for k in MATRIX_SPOTS}
    ok = all(within(spots[k], MATRIX_SPOTS[k], 0.0005) for k in MATRIX_SPOTS)
    printed = [row.split() for row in PRINTED_MATRIX.strip().splitlines()]
    mism = sum(format_ratio(x) != p for row, prow in zip(M.values, printed) for x, p in zip(row, prow))
    record(7, ok and mism == 0, f"spot cells within ±.0005: {ok}; full matrix mismatched cells: {mism}")


def test_criterion_08_modularity(iv, refs):
    q = {k: newman_q(iv, refs.named[k]).value for k in ("newman-4", "ca-pi4", "ca-pi2", "rpg1-pi4", "rpg2-pi4")}
    ca_match = [k for k in ("ca-pi2", "ca-pi4") if within(q[k], Q_CA, 0.005)]
    ok = (within(q["newman-4"], Q_NEWMAN, 0.002) and bool(ca_match)
          and within(q["rpg1-pi4"], Q_RPG1, 0.005) and within(q["rpg2-pi4"], Q_RPG2, 0.005))
    record(8, ok, f"Q 4-set {q['newman-4']:.4f}, CA .208 matched by {ca_match} "
                  f"(pi2 {q['ca-pi2']:.4f}, pi4 {q['ca-pi4']:.4f}), rpg1 {q['rpg1-pi4']:.4f}, rpg2 {q['rpg2-pi4']:.4f}")
    assert ca_match == ["ca-pi4"]


def test_criterion_09_sampling():
    small = estimate_cut_stats(9, 14, 5, 10**6, SEED)
    big = estimate_cut_stats(141, 1383, 75, 10**5, SEED)
    parts = {
        "mean": within(small.mean, SMALL_MEAN, 0.01),
        "small variance": within(small.variance, SMALL_VAR, 0.15),
        "large variance": within(big.variance, BIG_VAR, 0.10 * BIG_VAR),
        "mn formula": int(big.formula_mn) == BIG_MN,
    }
    text = (f"mean {small.mean:.4f}, variance {small.variance:.4f} (want 2.60 ± 0.15; exact under the "
            f"uniform model {small.exact_variance:.4f}), large variance {big.variance:.2f}, mn {int(big.formula_mn)}")
    failed = [k for k, v in parts.items() if not v]
    record(9, not failed, text + (f"; failing: {', '.join(failed)}" if failed else ""))


def test_criterion_10_topdown_search(iv, refs):
    c = induced_subgraph(iv, refs.letter("C"))
    cfg = SearchConfig(measure="h2-decomp", latis=100, min_size=2)
    tops, leaf_vals, trees = [], [], set()
    for s in run_seeds(SEED, 100):
        t = decompose_topdown(c, cfg.with_(seed=s))
        tops.append(t.value)
        leaf_vals.append(hidecs2_notes(c, t.leaf_partition()).value)
        trees.add(t.key())
    best, lo, hi = min(tops), min(leaf_vals), max(leaf_vals)
    ok = within(best, TOP_C, 0.01) and len(trees) >= MIN_TREES and lo >= LEAF_LO - 0.5 and hi <= LEAF_HI + 0.5
    record(10, ok, f"best top split {best:.2f}, distinct trees {len(trees)}, leaf-level range [{lo:.2f}, {hi:.2f}]")


def test_criterion_11_property_suites():
    props = property_suite(SEED, 1000)
    orc = oracle_suite(SEED)
    fails = {k: f for k, (f, _) in props.items() if f}
    fails.update({k: orc[k][0] for k in ("cliques", "brute-force") if orc[k][0]})
    hits, n = orc["bisect-hits"]
    ok = not fails and hits / n >= 0.9
    record(11, ok, f"identity failures {fails or 'none'} over 1000 instances; oracle failures none of 200; "
                   f"bisect latis=500 hits {hits}/{n}")


def test_criterion_12_counterexample():
    g, x, clusters = build_counterexample()
    R = frozenset().union(*(clusters[f"R{k}"] for k in range(4)))
    top = bisect_best(g, None, SearchConfig(measure="h2-decomp", latis=200, seed=SEED))
    greedy_r = next(cell for cell in top.partition.cells if x in cell) - {x} == R
    with_l2 = {}
    for meas in ("h3-stabl", "newman-q"):
        cell = next(c for c in stabl_search(g, SearchConfig(measure=meas, seed=SEED)).partition.cells if x in c)
        with_l2[meas] = frozenset(clusters["L2"]) <= cell and not cell & R
    record(12, greedy_r and all(with_l2.values()),
           f"greedy top-down puts x on the R side: {greedy_r}; cohesion-led search puts x with L2: {with_l2}")


def test_criterion_13_homeostasis():
    k = simulate_homeostasis(Graph.complete(5), 10**5, SEED)
    e = simulate_homeostasis(Graph.empty(5), 10**5, SEED)
    ratio = k.mean / e.mean
    record(13, RATIO_LO <= ratio <= RATIO_HI,
           f"settle-time ratio {ratio:.2f} ({k.mean:.2f} / {e.mean:.2f}), want [{RATIO_LO:g}, {RATIO_HI:g}]")


def test_criterion_14_external_data(tmp_path):
    rep = replicate_suite("all", SEED, {14})
    skipped = [c for c in rep.checks if c.status == "skipped: external data"]
    # with a user-supplied file the same checks execute and produce values
    f = tmp_path / "graph.txt"
    f.write_text("1 : 2, 3\n2 : 1, 3\n3 : 1, 2, 4\n4 : 3, 5, 6\n5 : 4, 6\n6 : 4, 5\n")
    ran = replicate_suite("all", SEED, {14}, hidecs3_graph=f, graph_a=f)
    executed = all(c.passed is not None and c.computed is not None for c in ran.checks)
    record(14, len(skipped) == 2 and executed,
           f"{len(skipped)} figure-only checks reported 'skipped: external data'; transcribed-file path executes: {executed}")
