import io
from functools import lru_cache

import numpy as np
import pandas as pd
import pytest

import networkx as nx

from polyprod.polyprod_types import GraphInputError, NonPlanarError, PlanarEmbedding
from polyprod.src.graph_core import from_edge_list, is_isomorphic, min_degree, relabel, to_networkx
from polyprod.src.harness import (
    CSV_COLUMNS, census, census_frame, export_embedding_svg, format_summary, graph_id, read_graphs,
    render_graph, write_census_csv, write_census_parquet,
)
from polyprod.src.planar_embed import test_planarity as planarity
from polyprod.src.products import complete, cube, cycle, path, prism, twisted_prism, wheel
from polyprod.src.utils.graph_io import encode_graph6, format_edgelist, sniff_format
from polyprod.src.utils.layout_tools import tutte_layout

from .test_classify import cube_with_chords
from .test_graph_core import atlas_graphs, grown_graphs


def test_read_graph6():
    graphs = list(read_graphs(["C~\n", "\n", "A_\n"]))
    assert is_isomorphic(graphs[0], complete(4))
    assert is_isomorphic(graphs[1], complete(2))


def test_read_graph6_header_and_round_trip():
    text = ">>graph6<<" + encode_graph6(cube())
    (G,) = read_graphs([text])
    assert is_isomorphic(G, cube())


def test_read_sparse6():
    line = nx.to_sparse6_bytes(to_networkx(prism(4)), header=False).decode("ascii")
    (G,) = read_graphs([line], fmt="sparse6")
    assert is_isomorphic(G, prism(4))


def test_read_edgelist_blocks():
    stream = "0 1\n1 2\n2 0\n\n# n=4 m=2\n0 1  # first\n2 3\n".splitlines(keepends=True)
    first, second = read_graphs(stream, fmt="edgelist")
    assert is_isomorphic(first, cycle(3))
    assert (second.n, second.m) == (4, 2)


def test_edgelist_round_trip_keeps_isolated_vertices():
    G = from_edge_list(5, [(0, 1), (1, 2), (0, 2)])
    (back,) = read_graphs(format_edgelist(G).splitlines(), fmt="edgelist")
    assert back.n == 5 and back.m == 3


def test_malformed_graph6_reports_line():
    with pytest.raises(GraphInputError) as info:
        list(read_graphs(["C~", "C"]))
    assert str(info.value).startswith("line 2:")
    assert info.value.line_no == 2


def test_lenient_skips_malformed_records():
    graphs = list(read_graphs(["C~", "C", "A_"], lenient=True))
    assert [G.n for G in graphs] == [4, 2]


@pytest.mark.parametrize("stream, line", [
    (["0 1", "1 x"], 2),
    (["0 1", "", "0 1 2"], 3),
    (["# n=2", "0 5"], 1),
    (["0 -1"], 1),
])
def test_malformed_edgelist_reports_line(stream, line):
    with pytest.raises(GraphInputError) as info:
        list(read_graphs(stream, fmt="edgelist"))
    assert info.value.line_no == line


def test_sparse6_needs_prefix():
    with pytest.raises(GraphInputError, match="must start with ':'"):
        list(read_graphs(["C~"], fmt="sparse6"))


def test_unknown_format():
    with pytest.raises(GraphInputError):
        list(read_graphs([], fmt="dimacs"))


@pytest.mark.parametrize("path, fmt", [("a.g6", "graph6"), ("b.s6", "sparse6"), ("c.el", "edgelist")])
def test_sniff_format(path, fmt):
    assert sniff_format(path) == fmt


def test_sniff_format_rejects_unknown_extension():
    with pytest.raises(GraphInputError):
        sniff_format("graph.txt")


def test_graph_id_is_label_invariant():
    G = prism(5)
    perm = [3, 7, 1, 9, 0, 2, 8, 4, 6, 5]
    assert graph_id(G) == graph_id(relabel(G, perm))
    assert graph_id(G) != graph_id(wheel(9))
    assert len(graph_id(G)) == 12


def test_census_on_wheels():
    report = census([wheel(k) for k in range(3, 10)])
    by_n = {r.n - 1: r for r in report.records}
    for k in (3, 5, 7, 9):
        assert by_n[k].accepted and by_n[k].branch == "Thm1-C3", f"wheel {k}: {by_n[k]}"
    for k in (4, 6, 8):
        assert not by_n[k].accepted and by_n[k].agree, f"wheel {k}: {by_n[k]}"
    assert report.summary["accepted"] == 4
    assert report.summary["disagreements"] == 0
    assert report.summary["by_branch"]["Thm1-C3"] == 4


def test_census_keeps_input_order():
    graphs = [cycle(5), wheel(3), path(4)]
    report = census(graphs)
    assert [(r.n, r.m) for r in report.records] == [(5, 5), (4, 6), (4, 3)]


def test_census_small_graphs_agree():
    report = census(atlas_graphs(4, 6))
    assert report.summary["total"] == len(atlas_graphs(4, 6))
    assert report.summary["disagreements"] == 0
    assert report.summary["invariant_violations"] == 0


def test_census_workers_match_serial():
    graphs = atlas_graphs(4, 5)
    serial = census(graphs, workers=1)
    parallel = census(graphs, workers=2)
    drop = lambda report: [r._replace(runtime_us=0) for r in report.records]  # noqa: E731
    assert drop(serial) == drop(parallel)
    assert serial.summary == parallel.summary


def test_census_min_degree_filter():
    graphs = atlas_graphs(4, 5)
    report = census(graphs, min_degree_filter=3)
    dropped = sum(min_degree(G) < 3 for G in graphs)
    assert report.summary["filtered"] == dropped
    assert report.summary["total"] == len(graphs) - dropped
    assert report.summary["min_degree"] == 3


def test_census_product_mode():
    report = census([cycle(4), cycle(5)], mode="product", kind="cartesian", J=complete(2))
    assert [r.accepted for r in report.records] == [True, True]
    assert all(r.branch == "Cart" for r in report.records)
    assert report.summary["disagreements"] == 0


@pytest.mark.parametrize("kwargs", [{"mode": "lexicographic"}, {"mode": "product"}])
def test_census_rejects_bad_mode(kwargs):
    with pytest.raises(ValueError):
        census([cycle(4)], **kwargs)


def test_census_csv_is_fixed_and_deterministic():
    graphs = [wheel(3), wheel(4), cycle(6)]
    first, second = io.StringIO(), io.StringIO()
    write_census_csv(census(graphs), first)
    write_census_csv(census(graphs), second)
    assert first.getvalue() == second.getvalue()
    lines = first.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4


def test_census_parquet_carries_runtime(tmp_path):
    report = census([wheel(3), wheel(5)])
    target = tmp_path / "census.parquet"
    write_census_parquet(report, str(target))
    frame = pd.read_parquet(target)
    assert list(frame.columns) == CSV_COLUMNS + ["runtime_us"]
    assert (frame["runtime_us"] >= 0).all()
    assert list(frame["accepted"]) == [True, True]


def test_census_frame_columns():
    frame = census_frame(census([wheel(3)]))
    assert list(frame.columns) == CSV_COLUMNS


def test_format_summary():
    text = format_summary(census([wheel(3), wheel(4)])).splitlines()
    assert text[0] == "graphs: 2 (filtered 0)"
    assert "accepted: 1" in text
    assert "disagreements: 0" in text
    assert "branch Thm1-C3: 1" in text


def test_tutte_layout_centres_the_inner_vertex():
    pos = tutte_layout(planarity(complete(4)))
    assert pos.shape == (4, 2)
    radii = np.linalg.norm(pos, axis=1)
    assert np.isclose(radii.min(), 0.0, atol=1e-5)
    assert np.allclose(np.sort(radii)[1:], 1.0, atol=1e-5)


def test_tutte_layout_of_cube_is_finite_and_distinct():
    pos = tutte_layout(planarity(cube()))
    assert np.isfinite(pos).all()
    assert len({tuple(np.round(p, 6)) for p in pos}) == 8


def test_svg_export_is_byte_stable():
    E = planarity(cube())
    first, second = io.BytesIO(), io.BytesIO()
    export_embedding_svg(E, first)
    export_embedding_svg(E, second)
    data = first.getvalue()
    assert data == second.getvalue()
    assert data.startswith(b"<?xml")
    assert b"<svg" in data


def test_svg_export_rejects_broken_rotation():
    E = planarity(cube())
    rotation = list(E.rotation)
    rotation[0] = rotation[0][:-1]
    with pytest.raises(NonPlanarError):
        export_embedding_svg(PlanarEmbedding(graph=E.graph, rotation=tuple(rotation)), io.BytesIO())


def test_render_graph(tmp_path):
    target = tmp_path / "wheel.svg"
    E = render_graph(wheel(5), str(target))
    assert E.graph.n == 6
    assert target.read_bytes().startswith(b"<?xml")


def test_render_refuses_nonplanar():
    with pytest.raises(NonPlanarError, match="K5"):
        render_graph(complete(5), io.BytesIO())


def test_graph6_stream_decodes_sparse6_records():
    sparse = nx.to_sparse6_bytes(to_networkx(prism(4)), header=False).decode("ascii")
    stream = ["C~\n", sparse, ">>sparse6<<" + sparse, "A_\n"]
    graphs = list(read_graphs(stream))
    assert [G.n for G in graphs] == [4, 8, 8, 2]
    assert is_isomorphic(graphs[1], prism(4)) and is_isomorphic(graphs[2], prism(4))


def test_graph6_stream_reports_bad_sparse6_line():
    with pytest.raises(GraphInputError) as info:
        list(read_graphs(["C~", ":\u00e9"]))
    assert info.value.line_no == 2


@pytest.mark.parametrize("n, accepted", [(4, 1), (5, 0)])
def test_census_accepted_counts(n, accepted):
    report = census(atlas_graphs(n, n), min_degree_filter=2)
    assert report.summary["accepted"] == accepted
    assert report.summary["total"] == len(grown_graphs(n))


@lru_cache(maxsize=None)
def eight_vertex_census():
    graphs = grown_graphs(8)
    return graphs, census(graphs, workers=4, min_degree_filter=2)


@pytest.mark.slow
def test_census_eight_vertices():
    graphs, report = eight_vertex_census()
    summary = report.summary
    assert summary["total"] == len(graphs) and summary["filtered"] == 0
    assert summary["disagreements"] == 0
    assert summary["invariant_violations"] == 0
    assert summary["delegated"] == 0
    accepted = [r for r in report.records if r.accepted]
    assert summary["accepted"] == len(accepted) > 0
    assert {graph_id(wheel(7)), graph_id(twisted_prism(2)), graph_id(cube_with_chords)} <= {r.id for r in accepted}
    for r in accepted:
        # a bipartite planar double has at most 2(2n) - 4 edges
        assert r.m <= 2 * r.n - 2, f"{r}"
        assert r.oracle and r.agree


@pytest.mark.slow
def test_census_eight_vertices_is_label_invariant():
    graphs, report = eight_vertex_census()
    ids = [r.id for r in report.records]
    assert len(set(ids)) == len(graphs)
    sample = graphs[::500]
    shuffled = [relabel(G, list(reversed(range(G.n)))) for G in sample]
    again = census(shuffled)
    assert [r.id for r in again.records] == ids[::500]
    assert [r.accepted for r in again.records] == [r.accepted for r in report.records[::500]]
