from __future__ import annotations

import json

import numpy as np
import pytest

from hidecs.graph import (
    Graph,
    ParseError,
    Partition,
    PartitionError,
    graph_to_table,
    induced_subgraph,
    is_clique,
    link_stats,
    parse_interactions,
    read_partition,
    symmetrize,
    write_partition,
)

TRI2 = [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]
K4 = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]


def test_parse_minimal_symmetric():
    raw = parse_interactions("1 : 2\n2 : 1\n")
    assert raw.n == 2 and raw.entries == ((1, (2,)), (2, (1,)))
    g, rep = symmetrize(raw)
    assert g.total == 1 and len(rep) == 0


def test_parse_comments_blank_lines_and_declared_count():
    raw = parse_interactions("# vertices: 5\n\n1 : 2, 3  # trailing\n3:\n")
    assert raw.n == 5
    assert raw.entries == ((1, (2, 3)), (3, ()))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1 : 1", "lists itself"),
        ("1 : 2\n1 : 3", "duplicate source"),
        ("1 2 3", "malformed"),
        ("1 : x", "bad id"),
        ("# vertices: 2\n1 : 3", "outside"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_interactions(text)


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError) as exc:
        parse_interactions("1 : 2\n2 : 1\noops\n")
    assert exc.value.line == 3


def test_symmetrize_and_rule_and_report():
    raw = parse_interactions("1 : 2, 3\n2 : 1\n3 :\n4 : 3\n")
    g, rep = symmetrize(raw)
    assert g.links == frozenset({(1, 2)})
    assert sorted(rep.entries) == [(1, 3), (4, 3)]
    assert rep.per_vertex == {1: 1, 3: 2, 4: 1}
    assert rep.lines() == ["1 -> 3", "4 -> 3"]


def test_symmetrize_promote_flag_keeps_one_way_links():
    raw = parse_interactions("1 : 2, 3\n2 : 1\n3 :\n")
    g, _ = symmetrize(raw, promote=True)
    assert g.links == frozenset({(1, 2), (1, 3)})


def test_symmetrize_identity_on_symmetric_input_and_idempotent():
    g = Graph.from_links(range(1, 7), TRI2 + [(3, 4)])
    g2, rep = symmetrize(graph_to_table(g))
    assert g2 == g and len(rep) == 0
    g3, rep3 = symmetrize(parse_interactions(graph_to_table(g2).to_text()))
    assert g3 == g and len(rep3) == 0


def test_graph_counts():
    g = Graph.from_links(range(1, 5), K4)
    assert (g.m, g.total, g.nsq1) == (4, 6, 6)
    assert g.degree(1) == 3 and g.neighbors(1) == frozenset({2, 3, 4})
    with pytest.raises(ValueError):
        Graph.from_links([1, 2], [(1, 1)])


def test_induced_subgraph():
    tri = Graph.from_links([1, 2, 3], [(1, 2), (1, 3), (2, 3)])
    assert induced_subgraph(tri, [1, 2, 3]) == tri
    sub = induced_subgraph(tri, [1, 2])
    assert sub.ids == (1, 2) and sub.links == frozenset({(1, 2)})
    with pytest.raises(KeyError):
        induced_subgraph(tri, [1, 9])


def test_is_clique():
    tri = Graph.from_links([1, 2, 3], [(1, 2), (1, 3), (2, 3)])
    path = Graph.from_links([1, 2, 3], [(1, 2), (2, 3)])
    assert is_clique(tri, [1, 2, 3])
    assert not is_clique(path, [1, 2, 3])
    assert is_clique(path, [3]) and is_clique(path, [])


def test_link_stats_examples():
    g = Graph.from_links(range(1, 7), TRI2)
    st = link_stats(g, Partition.of([[1, 2, 3], [4, 5, 6]]))
    assert st.internal == (3, 3) and st.cut == 0
    k4 = Graph.from_links(range(1, 5), K4)
    st = link_stats(k4, Partition.of([[1, 2], [3, 4]]))
    assert st.internal == (1, 1) and st.cut == 4
    assert st.total == sum(st.internal) + st.cut
    assert st.cross[0, 1] == st.cross[1, 0] == 4


def test_link_stats_uses_induced_subgraph():
    g = Graph.from_links(range(1, 7), TRI2 + [(3, 4)])
    st = link_stats(g, Partition.of([[1, 2], [3]]))
    assert (st.m, st.total, st.cut) == (3, 3, 2)


def test_partition_validation():
    with pytest.raises(PartitionError, match="overlap"):
        Partition.of([[1, 2], [2, 3]])
    with pytest.raises(PartitionError, match="empty"):
        Partition.of([[1], []])
    with pytest.raises(PartitionError, match="cover"):
        Partition.of([[1, 2]], universe=[1, 2, 3])
    with pytest.raises(PartitionError, match="name"):
        Partition.of([[1], [2]], names=["x"])


def test_partition_canonical_and_json_round_trip(tmp_path):
    p = Partition.of([[5, 4], [1, 3], [2]], names=["a", "b", "c"])
    assert p.canonical().key() == ((1, 3), (2,), (4, 5))
    assert p.same_as(Partition.of([[2], [3, 1], [4, 5]]))
    path = tmp_path / "p.json"
    write_partition(p, path)
    q = read_partition(path)
    assert q.key() == p.key() and q.cell_names() == ["a", "b", "c"]
    doc = json.loads(path.read_text())
    assert doc["sets"][0] == [4, 5]
    assert Partition.from_json({"sets": {"x": [1], "y": [2]}}).cell_names() == ["x", "y"]
    with pytest.raises(PartitionError):
        Partition.from_json({"cells": [[1]]})


def test_relabel_preserves_structure():
    g = Graph.from_links(range(1, 7), TRI2 + [(3, 4)])
    perm = dict(zip(range(1, 7), [6, 5, 4, 3, 2, 1]))
    h = g.relabel(perm)
    assert h.total == g.total
    assert h.has_link(4, 3) and h.has_link(6, 5)
    assert np.array_equal(np.sort(h.adj.sum(0)), np.sort(g.adj.sum(0)))
