import pytest

from metricdim import (
    UNREACHABLE,
    Graph,
    GraphParseError,
    bfs_distances,
    bfs_row,
    connected_components,
    format_edge_list,
    generate,
    graph_from_json,
    graph_to_json,
    graph_to_json_dict,
    parse_edge_list,
)
from helpers import family_corpus, floyd_warshall, random_corpus


def test_parse_basic_path():
    g = parse_edge_list("0 1\n1 2")
    assert g.vertex_count == 3
    assert list(g.edges()) == [(0, 1), (1, 2)]


def test_parse_deduplicates():
    g = parse_edge_list("0 1\n0 1")
    assert g.vertex_count == 2
    assert g.edge_count == 1


def test_parse_rejects_self_loop():
    with pytest.raises(GraphParseError) as err:
        parse_edge_list("0 0")
    assert "self-loop" in str(err.value)


def test_parse_comments_blanks_and_header():
    g = parse_edge_list("# a comment\n\nn 5\n0 1\n\n# another\n3 4\n")
    assert g.vertex_count == 5
    assert list(g.edges()) == [(0, 1), (3, 4)]


def test_parse_malformed_token_reports_line():
    with pytest.raises(GraphParseError) as err:
        parse_edge_list("0 1\n1 x")
    assert err.value.line == 2


def test_parse_header_conflicts():
    with pytest.raises(GraphParseError):
        parse_edge_list("n 2\n0 5")
    with pytest.raises(GraphParseError):
        parse_edge_list("n 3\nn 4\n0 1")


def test_parse_wrong_arity():
    with pytest.raises(GraphParseError):
        parse_edge_list("0 1 2")


def test_from_edges_rejects_self_loop_and_range():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])


def test_round_trip_edge_list():
    for name, g in family_corpus() + random_corpus(10, 4, 12, seed=5):
        again = parse_edge_list(format_edge_list(g))
        assert again == g, name


def test_round_trip_json():
    for name, g in family_corpus():
        assert graph_from_json(graph_to_json(g)) == g, name
    d = graph_to_json_dict(generate("complete", 4))
    assert d["n"] == 4
    assert d["edges"] == sorted(d["edges"])


def test_bfs_path():
    g = generate("path", 3)
    assert bfs_distances(g, 0).dist == (0, 1, 2)


def test_bfs_triangle_and_cycle():
    assert bfs_distances(generate("cycle", 3), 0).dist == (0, 1, 1)
    assert bfs_distances(generate("cycle", 5), 0).dist == (0, 1, 2, 2, 1)


def test_bfs_unreachable_sentinel():
    g = Graph.from_edges(3, [(0, 1)])
    row = bfs_row(g, 0)
    assert row[2] is UNREACHABLE
    # hop arithmetic on the sentinel must fail loudly, not produce a number
    with pytest.raises(TypeError):
        row[2] + 1


def test_bfs_source_out_of_range():
    with pytest.raises(ValueError):
        bfs_row(generate("path", 3), 3)


def test_bfs_edge_lipschitz():
    for name, g in random_corpus(20, 4, 14, seed=9):
        for s in range(g.vertex_count):
            row = bfs_row(g, s)
            assert row[s] == 0
            for u, v in g.edges():
                assert abs(row[u] - row[v]) <= 1, name


def test_bfs_matches_floyd_warshall():
    for name, g in family_corpus() + random_corpus(15, 4, 14, seed=3):
        if g.vertex_count > 50:
            continue
        fw = floyd_warshall(g)
        for s in range(g.vertex_count):
            row = bfs_row(g, s)
            for v in range(g.vertex_count):
                want = fw[s][v]
                got = row[v]
                assert (got is UNREACHABLE and want == float("inf")) or got == want


def test_triangle_inequality_sampled():
    import random

    rng = random.Random(0)
    for name, g in random_corpus(10, 5, 14, seed=8):
        n = g.vertex_count
        rows = [bfs_row(g, s) for s in range(n)]
        for _ in range(50):
            u, v, w = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            assert rows[u][w] <= rows[u][v] + rows[v][w]


def test_components():
    assert connected_components(Graph.from_edges(3, [])) == [[0], [1], [2]]
    assert connected_components(generate("path", 4)) == [[0, 1, 2, 3]]
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert connected_components(two_triangles) == [[0, 1, 2], [3, 4, 5]]


def test_generators_shapes():
    assert generate("complete", 4).edge_count == 6
    sp = generate("spider", 3, 2)
    assert (sp.vertex_count, sp.edge_count) == (7, 6)
    p1 = generate("path", 1)
    assert (p1.vertex_count, p1.edge_count) == (1, 0)
    assert generate("star", 6).degree(0) == 6
    sub = generate("subdivided_complete", 3, 2)
    assert (sub.vertex_count, sub.edge_count) == (9, 9)
    assert generate("subdivided_complete", 4, 0) == generate("complete", 4)


def test_generator_bad_params():
    with pytest.raises(ValueError):
        generate("cycle", 2)
    with pytest.raises(ValueError):
        generate("path", 0)
    with pytest.raises(ValueError):
        generate("spider", 0, 2)
    with pytest.raises(ValueError):
        generate("nosuch", 3)
    with pytest.raises(ValueError):
        generate("random_connected", 5, 3, seed=1)  # fewer edges than a tree
    with pytest.raises(ValueError):
        generate("random_connected", 4, 7, seed=1)  # more than complete
    with pytest.raises(ValueError):
        generate("random_connected", 5, 5)  # seed required


def test_random_connected_reproducible():
    a = generate("random_connected", 12, 16, seed=42)
    b = generate("random_connected", 12, 16, seed=42)
    c = generate("random_connected", 12, 16, seed=43)
    assert a == b
    assert a != c
    assert a.edge_count == 16
    assert len(connected_components(a)) == 1
