import os
import tempfile

import numpy as np
import pytest
from hypothesis import given

from rrspectral.errors import DataFormatError
from rrspectral.graph import build_graph, complete_graph, is_connected, path_graph
from rrspectral.ingest import (
    PruneConfig,
    find_dataset,
    format_graph,
    parse_edge_list,
    prune,
    read_graph,
    write_graph,
)
from rrspectral.spectral import sweep

from conftest import graphs


def write(tmp_path, text, name="g.edges"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_path(tmp_path):
    G, ids = parse_edge_list(write(tmp_path, "0 1\n1 2\n"))
    assert G == path_graph(3) and ids.tolist() == [0, 1, 2]


def test_parse_dedupes_comments_and_remaps(tmp_path):
    res = parse_edge_list(write(tmp_path, "# header\n1 0\n0 1\n\n# more\n"))
    assert res.graph.m == 1 and res.duplicates == 1
    G, ids = parse_edge_list(write(tmp_path, "107 3\n3 9000\n42 42\n"))
    assert ids.tolist() == [3, 107, 9000]
    assert G.edges.tolist() == [[0, 1], [0, 2]]
    assert parse_edge_list(write(tmp_path, "107 3\n3 9000\n42 42\n")).self_loops == 1


@pytest.mark.parametrize(
    "text,line",
    [("0 1\n1 x\n", 2), ("0 1 2\n", 1), ("# c\n0\n", 2), ("0 -1\n", 1)],
)
def test_parse_errors_report_line(tmp_path, text, line):
    with pytest.raises(DataFormatError, match=f"line {line}:") as info:
        parse_edge_list(write(tmp_path, text))
    assert info.value.line == line


def test_parse_empty(tmp_path):
    for text in ("", "# only comments\n", "3 3\n"):
        with pytest.raises(DataFormatError):
            parse_edge_list(write(tmp_path, text))


def test_parse_is_idempotent(tmp_path):
    src = write(tmp_path, "5 9\n9 2\n2 5\n7 5\n")
    G, _ = parse_edge_list(src)
    again = write(tmp_path, format_graph(G).split("\n", 1)[1], name="h.edges")
    assert parse_edge_list(again).graph == G


def test_prune_keeps_dense_graph():
    # clique halves joined by 20 edges: the sweep side has boundary 20 > 10
    pairs = [(i, j) for i in range(12) for j in range(i + 1, 12)]
    pairs += [(12 + i, 12 + j) for i in range(12) for j in range(i + 1, 12)]
    pairs += [(i, 12 + (i + k) % 12) for i in range(10) for k in range(2)]
    G = build_graph(24, pairs)
    assert sweep(G).edges_cut == 20
    H, log = prune(G, PruneConfig())
    assert H == G and len(log) == 0


def test_prune_removes_pendant_path():
    pairs = [(i, j) for i in range(50) for j in range(i + 1, 50)]
    pairs += [(49, 50), (50, 51), (51, 52), (52, 53), (53, 54)]
    H, log = prune(build_graph(55, pairs))
    assert H == complete_graph(50)
    (r,) = log.removals
    assert (r.round, r.size, r.boundary) == (1, 5, 1)
    assert r.vertices == (50, 51, 52, 53, 54)
    assert log.kept.tolist() == list(range(50))


def test_prune_drops_small_component():
    pairs = [(i, j) for i in range(40) for j in range(i + 1, 40)]
    pairs += [(40 + i, 40 + j) for i in range(5) for j in range(i + 1, 5)]
    H, log = prune(build_graph(45, pairs))
    assert H.n == 40
    assert log.removals[0].round == 0 and log.removals[0].size == 5


def test_prune_respects_keep_fraction_and_rounds():
    G = path_graph(20)
    H, log = prune(G, PruneConfig(boundary_threshold=10, min_keep_fraction=0.9))
    assert H == G and "min_keep_fraction" in log.stop_reason
    H, log = prune(G, PruneConfig(boundary_threshold=10, max_rounds=0))
    assert H == G


def test_pruned_graph_stopping_condition():
    rng = np.random.default_rng(4)
    core = np.argwhere(np.triu(rng.random((60, 60)) < 0.4, 1))
    tails = [(int(rng.integers(60)), 60 + k) for k in range(6)] + [(60 + k, 66 + k) for k in range(6)]
    G = build_graph(72, np.concatenate([core, np.array(tails)]))
    cfg = PruneConfig()
    H, log = prune(G, cfg)
    assert is_connected(H)
    sw = sweep(H)
    side = min(sw.cut.size, H.n - sw.cut.size)
    assert sw.edges_cut > cfg.boundary_threshold or H.n - side < cfg.min_keep_fraction * H.n
    assert prune(G, cfg)[0] == H
    assert "round size boundary" in log.render()


def test_canonical_triangle(tmp_path):
    p = tmp_path / "t.txt"
    write_graph(complete_graph(3), p)
    assert p.read_text() == "3 3\n0 1\n0 2\n1 2\n"


@given(graphs(min_n=0, max_n=12))
def test_write_read_roundtrip(G):
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "g.txt")
        write_graph(G, path)
        assert read_graph(path) == G


@pytest.mark.parametrize(
    "text,line",
    [
        ("3 x\n0 1\n", 1),
        ("3 2\n0 1\n", 1),
        ("3 2\n0 2\n0 1\n", 3),
        ("3 1\n1 0\n", 2),
        ("3 1\n0 3\n", 2),
        ("3 1\n0\n", 2),
        ("", 1),
    ],
)
def test_read_graph_errors(tmp_path, text, line):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    with pytest.raises(DataFormatError, match=f"line {line}:"):
        read_graph(p)


def test_find_dataset(tmp_path, monkeypatch):
    (tmp_path / "0.edges").write_text("0 1\n")
    monkeypatch.setenv("RRSPECTRAL_DATA_DIR", str(tmp_path))
    assert find_dataset("0.edges") == tmp_path / "0.edges"
    assert find_dataset("1684.edges") is None
    monkeypatch.delenv("RRSPECTRAL_DATA_DIR")
    assert find_dataset("0.edges") is None
    assert find_dataset("0.edges", explicit=tmp_path) == tmp_path / "0.edges"
