import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowham import (
    MAX_IDS,
    NO_EDGE,
    UNCOLOURED,
    ColouredDigraph,
    DirectedPath,
    EdgeMatching,
    GraphFormatError,
    concat_paths,
    is_rainbow,
    make_seed_digraph,
    min_semidegree,
    read_graph_file,
    verify_rainbow_hamilton_cycle,
    verify_rainbow_path_contract,
    write_graph_file,
)


def complete_bidirected(n, kappa, colour=UNCOLOURED):
    edges = [(u, v, colour) for u in range(n) for v in range(n) if u != v]
    return ColouredDigraph.from_edges(n, kappa, edges)


def rainbow_cycle(n):
    """n-cycle 0 -> 1 -> ... -> 0 with edge i -> i+1 coloured i."""
    edges = [(i, (i + 1) % n, i) for i in range(n)]
    return ColouredDigraph.from_edges(n, n, edges)


# -- construction --------------------------------------------------------


def test_from_edges_round_trips_queries():
    d = ColouredDigraph.from_edges(3, 4, [(0, 1, 2), (1, 2, 3)])
    assert d.n == 3 and d.kappa == 4
    assert d.edge_count == 2
    assert d.has_edge(0, 1) and not d.has_edge(1, 0)
    assert d.colour(0, 1) == 2
    assert sorted(d.edges()) == [(0, 1, 2), (1, 2, 3)]


def test_from_edges_rejects_self_loop():
    with pytest.raises(ValueError):
        ColouredDigraph.from_edges(2, 1, [(0, 0, 0)])


def test_from_edges_rejects_duplicate_edge():
    with pytest.raises(ValueError):
        ColouredDigraph.from_edges(2, 1, [(0, 1, 0), (0, 1, 0)])


def test_from_edges_rejects_out_of_range_ids():
    with pytest.raises(ValueError):
        ColouredDigraph.from_edges(2, 1, [(0, 2, 0)])
    with pytest.raises(ValueError):
        ColouredDigraph.from_edges(2, 1, [(0, 1, 1)])


def test_id_bound_is_enforced():
    with pytest.raises(ValueError):
        ColouredDigraph(np.full((2, 2), NO_EDGE, dtype=np.int32), MAX_IDS + 1)
    with pytest.raises(ValueError):
        ColouredDigraph.from_edges(MAX_IDS + 1, 1, [])


def test_degree_and_neighbour_queries():
    d = ColouredDigraph.from_edges(4, 1, [(0, 1, 0), (0, 2, 0), (3, 0, 0)])
    assert d.out_degrees.tolist() == [2, 0, 0, 1]
    assert d.in_degrees.tolist() == [1, 1, 1, 0]
    assert d.out_neighbours(0).tolist() == [1, 2]
    assert d.in_neighbours(0).tolist() == [3]


def test_fully_coloured_flag():
    assert not ColouredDigraph.from_edges(2, 1, [(0, 1, UNCOLOURED)]).fully_coloured
    assert ColouredDigraph.from_edges(2, 1, [(0, 1, 0)]).fully_coloured
    assert ColouredDigraph.from_edges(2, 1, []).fully_coloured


def test_induced_subgraph_relabels():
    d = rainbow_cycle(5)
    sub, vmap = d.induced_subgraph([1, 2, 4], [1, 2, 3])
    assert sub.n == 3
    assert list(vmap) == [1, 2, 4]
    assert sub.has_edge(0, 1) and sub.colour(0, 1) == 1
    assert not sub.has_edge(1, 2)
    assert sub.edge_count == 1


def test_induced_subgraph_drops_out_of_palette_edges():
    d = rainbow_cycle(5)
    sub, _ = d.induced_subgraph([0, 1], [3])
    assert sub.edge_count == 0


# -- min_semidegree -------------------------------------------------------


def test_min_semidegree_complete_bidirected():
    assert min_semidegree(complete_bidirected(4, 1)) == 3


def test_min_semidegree_complete_bipartite():
    d = make_seed_digraph("complete-bipartite-bidirected", 8, 0.25)
    assert min_semidegree(d) == 2


def test_min_semidegree_isolated_vertex():
    d = ColouredDigraph.from_edges(3, 1, [(0, 1, 0), (1, 0, 0)])
    assert min_semidegree(d) == 0


# -- is_rainbow -----------------------------------------------------------


def test_is_rainbow_on_empty_edge_set():
    assert is_rainbow(rainbow_cycle(3), [])


def test_is_rainbow_distinct_and_repeated():
    d = ColouredDigraph.from_edges(3, 2, [(0, 1, 0), (1, 2, 1), (2, 0, 1)])
    assert is_rainbow(d, [(0, 1), (1, 2)])
    assert not is_rainbow(d, [(1, 2), (2, 0)])


def test_is_rainbow_rejects_missing_edge():
    with pytest.raises(KeyError):
        is_rainbow(rainbow_cycle(3), [(0, 2)])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
                max_size=12))
def test_is_rainbow_matches_multiset_definition(triples):
    seen = set()
    edges = []
    for u, v, c in triples:
        if u != v and (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v, c))
    d = ColouredDigraph.from_edges(6, 6, edges)
    cols = [c for _, _, c in edges]
    assert is_rainbow(d, [(u, v) for u, v, _ in edges]) == (len(set(cols)) == len(cols))


# -- cycle verifier -------------------------------------------------------


def test_verifier_accepts_rainbow_triangle():
    assert verify_rainbow_hamilton_cycle(rainbow_cycle(3), [0, 1, 2])


def test_verifier_rejects_missing_edge():
    d = ColouredDigraph.from_edges(3, 3, [(0, 1, 0), (1, 2, 1)])
    verdict = verify_rainbow_hamilton_cycle(d, [0, 1, 2])
    assert not verdict and verdict.violation.tag == "missing-edge"
    assert verdict.violation.witness == (2, 0)


def test_verifier_rejects_colour_repeat():
    d = ColouredDigraph.from_edges(3, 3, [(0, 1, 0), (1, 2, 1), (2, 0, 0)])
    verdict = verify_rainbow_hamilton_cycle(d, [0, 1, 2])
    assert not verdict and verdict.violation.tag == "colour-repeat"


def test_verifier_rejects_bad_vertex_coverage():
    d = rainbow_cycle(4)
    assert verify_rainbow_hamilton_cycle(d, [0, 1, 2]).violation.tag == "vertex-coverage"
    assert verify_rainbow_hamilton_cycle(d, [0, 1, 2, 2]).violation.tag == "vertex-coverage"


def test_accepted_cycle_uses_n_edges_and_n_colours():
    n = 6
    d = rainbow_cycle(n)
    seq = list(range(n))
    assert verify_rainbow_hamilton_cycle(d, seq)
    edges = list(zip(seq, seq[1:] + seq[:1]))
    assert len(edges) == n
    assert len({d.colour(u, v) for u, v in edges}) == n


# -- path contract verifier ----------------------------------------------


def test_contract_accepts_exact_cover():
    d = rainbow_cycle(4)
    p = DirectedPath((0, 1, 2))
    assert verify_rainbow_path_contract(d, p, 0, 2, {0, 1, 2}, {0, 1})


def test_contract_rejects_vertex_set_mismatch():
    d = rainbow_cycle(4)
    p = DirectedPath((0, 1, 2))
    verdict = verify_rainbow_path_contract(d, p, 0, 2, {0, 1, 2, 3}, {0, 1})
    assert verdict.violation.tag == "vertex-set-mismatch"
    assert verdict.violation.witness == {3}


def test_contract_rejects_colour_set_mismatch():
    d = rainbow_cycle(4)
    p = DirectedPath((0, 1, 2))
    verdict = verify_rainbow_path_contract(d, p, 0, 2, {0, 1, 2}, {0, 3})
    assert verdict.violation.tag == "colour-set-mismatch"


def test_contract_rejects_endpoint_mismatch():
    d = rainbow_cycle(4)
    p = DirectedPath((0, 1, 2))
    verdict = verify_rainbow_path_contract(d, p, 0, 3, {0, 1, 2}, {0, 1})
    assert verdict.violation.tag == "endpoint-mismatch"


def test_contract_identity_vertices_one_more_than_colours():
    d = rainbow_cycle(5)
    p = DirectedPath((0, 1, 2, 3))
    assert verify_rainbow_path_contract(d, p, 0, 3, set(p.vertices), {0, 1, 2})
    assert len(p) == 3 + 1


# -- paths ----------------------------------------------------------------


def test_directed_path_basics():
    p = DirectedPath((3, 1, 2))
    assert p.first == 3 and p.last == 2
    assert p.length == 2 and len(p) == 3
    assert list(p.edges()) == [(3, 1), (1, 2)]


def test_directed_path_allows_empty_and_single():
    assert len(DirectedPath(())) == 0
    assert DirectedPath((5,)).length == 0


def test_directed_path_rejects_repeats():
    with pytest.raises(ValueError):
        DirectedPath((1, 2, 1))


def test_concat_paths_joins_on_shared_endpoint():
    q = concat_paths([DirectedPath((0, 1)), DirectedPath((1, 2))])
    assert q.vertices == (0, 1, 2)


def test_concat_paths_empty_identity():
    q = concat_paths([DirectedPath(()), DirectedPath((0, 1)), DirectedPath(())])
    assert q.vertices == (0, 1)


def test_concat_paths_endpoint_mismatch():
    with pytest.raises(ValueError, match="endpoint-mismatch"):
        concat_paths([DirectedPath((0, 1)), DirectedPath((2, 3))])


def test_concat_paths_rejects_interior_repeat():
    with pytest.raises(ValueError, match="repetition"):
        concat_paths([DirectedPath((0, 1, 2)), DirectedPath((2, 1))])


def test_edge_matching_rejects_shared_vertices():
    EdgeMatching(frozenset({(0, 1), (2, 3)}))
    with pytest.raises(ValueError):
        EdgeMatching(frozenset({(0, 1), (1, 2)}))
    with pytest.raises(ValueError):
        EdgeMatching(frozenset({(0, 0)}))


# -- file format ----------------------------------------------------------


def test_graph_file_round_trip(tmp_path):
    d = rainbow_cycle(5)
    path = tmp_path / "g.txt"
    write_graph_file(d, path)
    assert read_graph_file(path) == d


def test_graph_file_preserves_uncoloured(tmp_path):
    d = ColouredDigraph.from_edges(3, 2, [(0, 1, UNCOLOURED), (1, 2, 1)])
    path = tmp_path / "g.txt"
    write_graph_file(d, path)
    back = read_graph_file(path)
    assert back == d and not back.fully_coloured


def test_graph_file_rejects_bad_header(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("3\n")
    with pytest.raises(GraphFormatError):
        read_graph_file(path)


def test_graph_file_rejects_empty(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("")
    with pytest.raises(GraphFormatError):
        read_graph_file(path)


def test_graph_file_rejects_bad_edge_line(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("2 1\n0 1\n")
    with pytest.raises(GraphFormatError):
        read_graph_file(path)


def test_graph_file_rejects_duplicate_edge(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("2 1\n0 1 0\n0 1 0\n")
    with pytest.raises(GraphFormatError):
        read_graph_file(path)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(0, 4)),
                max_size=20))
def test_graph_file_round_trip_property(tmp_path_factory, triples):
    seen = set()
    edges = [(u, v, c) for u, v, c in triples
             if u != v and (u, v) not in seen and not seen.add((u, v))]
    d = ColouredDigraph.from_edges(8, 5, edges)
    path = tmp_path_factory.mktemp("g") / "g.txt"
    write_graph_file(d, path)
    assert read_graph_file(path) == d
