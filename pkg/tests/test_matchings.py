import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowham import (
    ColouredDigraph,
    Hypergraph,
    PathFamily,
    RngStream,
    brute_force_max_matching,
    greedy_maximal_matching,
    is_hypergraph_matching,
    max_bipartite_matching,
    monochromatic_matching,
    rainbow_path_family,
    rainbow_triangle_family,
    sample_and_match,
)

from test_search import all_distinct_complete


def hyper(r, n, edges):
    return Hypergraph.from_edges(r, n, edges)


def brute_bipartite_size(left, right, adj):
    """Maximum bipartite matching size by exhaustive assignment."""
    left = sorted(left)

    def rec(i, used):
        if i == len(left):
            return 0
        best = rec(i + 1, used)
        for v in adj.get(left[i], ()):
            if v not in used:
                best = max(best, 1 + rec(i + 1, used | {v}))
        return best

    return rec(0, frozenset())


# -- hypergraph basics --------------------------------------------------------


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        hyper(1, 3, [])
    with pytest.raises(ValueError):
        hyper(2, 3, [[0, 1, 2]])
    with pytest.raises(ValueError):
        hyper(2, 3, [[0, 3]])


def test_is_hypergraph_matching():
    assert is_hypergraph_matching([frozenset({0, 1}), frozenset({2, 3})])
    assert not is_hypergraph_matching([frozenset({0, 1}), frozenset({1, 2})])


# -- greedy and brute matchings -----------------------------------------------


def test_greedy_takes_first_edge_of_a_path():
    h = hyper(2, 3, [[0, 1], [1, 2]])
    assert greedy_maximal_matching(h, [0, 1]) == [frozenset({0, 1})]


def test_greedy_collects_disjoint_triples():
    h = hyper(3, 6, [[0, 1, 2], [3, 4, 5]])
    assert len(greedy_maximal_matching(h, [0, 1])) == 2


def test_greedy_requires_a_permutation():
    h = hyper(2, 3, [[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        greedy_maximal_matching(h, [0, 0])


def test_brute_force_on_triangle():
    h = hyper(2, 3, [[0, 1], [1, 2], [0, 2]])
    assert len(brute_force_max_matching(h)) == 1


def test_brute_force_on_perfect_matching():
    h = hyper(2, 6, [[0, 1], [2, 3], [4, 5], [1, 2], [3, 4]])
    assert len(brute_force_max_matching(h)) == 3


def test_brute_force_edge_limit():
    h = hyper(2, 30, [[i, i + 1] for i in range(25)])
    with pytest.raises(ValueError):
        brute_force_max_matching(h)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9)),
                max_size=12))
def test_greedy_is_maximal_and_brute_is_no_smaller(raw):
    edges = [e for e in ({a, b, c} for a, b, c in raw) if len(e) == 3]
    h = hyper(3, 10, edges)
    greedy = greedy_maximal_matching(h, list(range(len(h.edges))))
    best = brute_force_max_matching(h)
    assert is_hypergraph_matching(greedy)
    assert is_hypergraph_matching(best)
    assert len(best) >= len(greedy)
    # maximality: no remaining edge is disjoint from the greedy pick
    used = set().union(*greedy) if greedy else set()
    assert all(e & used for e in h.edges if e not in greedy)


# -- sample_and_match -----------------------------------------------------------


def test_sample_and_match_zero_draws():
    h = hyper(2, 4, [[0, 1], [2, 3]])
    assert sample_and_match(h, "with-replacement", RngStream(0).child("s"), m=0) == []


def test_sample_and_match_bernoulli_one_keeps_everything():
    h = hyper(2, 6, [[0, 1], [2, 3], [4, 5]])
    out = sample_and_match(h, "bernoulli", RngStream(0).child("s"), p=1.0)
    assert len(out) == 3


def test_sample_and_match_bernoulli_zero_is_empty():
    h = hyper(2, 6, [[0, 1], [2, 3], [4, 5]])
    assert sample_and_match(h, "bernoulli", RngStream(0).child("s"), p=0.0) == []


def test_sample_and_match_outputs_matchings():
    h = hyper(2, 8, [[a, b] for a, b in itertools.combinations(range(8), 2)])
    rs = RngStream(4)
    for i in range(20):
        out = sample_and_match(h, "with-replacement", rs.child("t", i), m=12)
        assert is_hypergraph_matching(out)
        assert all(e in h.edges for e in out)


def test_sample_and_match_hits_large_matchings_often():
    # Complete 2-uniform hypergraph on 60 vertices, m = 60 draws: the greedy
    # matches at least 6 pairs in almost every run.
    h = hyper(2, 60, [[a, b] for a, b in itertools.combinations(range(60), 2)])
    rs = RngStream(7)
    hits = sum(
        1 for i in range(100)
        if len(sample_and_match(h, "with-replacement", rs.child("t", i), m=60)) >= 6
    )
    assert hits >= 95


def test_sample_and_match_input_errors():
    h = hyper(2, 4, [[0, 1]])
    with pytest.raises(ValueError):
        sample_and_match(h, "with-replacement", RngStream(0).child("s"))
    with pytest.raises(ValueError):
        sample_and_match(h, "bernoulli", RngStream(0).child("s"), p=1.5)
    with pytest.raises(ValueError):
        sample_and_match(h, "nope", RngStream(0).child("s"), m=1)
    with pytest.raises(ValueError):
        sample_and_match(hyper(2, 4, []), "with-replacement",
                         RngStream(0).child("s"), m=1)


# -- bipartite matching ----------------------------------------------------------


def test_max_bipartite_complete_three_by_three():
    adj = {u: [3, 4, 5] for u in (0, 1, 2)}
    pairing = max_bipartite_matching([0, 1, 2], [3, 4, 5], adj)
    assert len(pairing) == 3
    assert set(pairing.values()) == {3, 4, 5}


def test_max_bipartite_star_picks_one():
    adj = {0: [9], 1: [9], 2: [9]}
    pairing = max_bipartite_matching([0, 1, 2], [9], adj)
    assert len(pairing) == 1


def test_max_bipartite_ignores_out_of_side_pairs():
    pairing = max_bipartite_matching([0], [1], {0: [1, 7]})
    assert pairing == {0: 1}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(10, 15)), max_size=18))
def test_max_bipartite_matches_exhaustive_oracle(pairs):
    adj: dict[int, list[int]] = {}
    for u, v in pairs:
        adj.setdefault(u, []).append(v)
    pairing = max_bipartite_matching(range(6), range(10, 16), adj)
    assert all(v in adj[u] for u, v in pairing.items())
    assert len(set(pairing.values())) == len(pairing)
    assert len(pairing) == brute_bipartite_size(range(6), range(10, 16), adj)


# -- monochromatic matching -------------------------------------------------------


def test_mono_matching_on_a_star_is_one():
    d = ColouredDigraph.from_edges(4, 1, [(0, 1, 0), (0, 2, 0), (0, 3, 0)])
    assert len(monochromatic_matching(d, 0, [0], [1, 2, 3])) == 1


def test_mono_matching_two_disjoint_edges():
    d = ColouredDigraph.from_edges(4, 2, [(0, 1, 1), (2, 3, 1), (1, 2, 0)])
    m = monochromatic_matching(d, 1, [0, 2], [1, 3])
    assert m.edges == frozenset({(0, 1), (2, 3)})


def test_mono_matching_respects_direction_and_colour():
    d = ColouredDigraph.from_edges(3, 2, [(0, 1, 0), (2, 1, 1)])
    assert len(monochromatic_matching(d, 1, [1], [2])) == 0
    assert len(monochromatic_matching(d, 0, [0], [1])) == 1


def test_mono_matching_overlapping_sides():
    # Directed path 0 -> 1 -> 2 -> 3 in one colour with X = Y = all: the
    # blossom route must still find two vertex-disjoint edges.
    d = ColouredDigraph.from_edges(4, 1, [(0, 1, 0), (1, 2, 0), (2, 3, 0)])
    m = monochromatic_matching(d, 0, range(4), range(4))
    assert len(m) == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=14),
       st.booleans())
def test_mono_matching_matches_brute_force(pairs, overlap):
    edges = sorted({(u, v) for u, v in pairs if u != v})
    d = ColouredDigraph.from_edges(8, 1, [(u, v, 0) for u, v in edges])
    xs = range(8) if overlap else range(4)
    ys = range(8) if overlap else range(4, 8)
    m = monochromatic_matching(d, 0, xs, ys)
    arcs = [(u, v) for u, v in edges if u in set(xs) and v in set(ys)]
    if len(arcs) <= 24:
        h = hyper(2, 8, [[u, v] for u, v in arcs])
        assert len(m) == len(brute_force_max_matching(h))


# -- rainbow families ---------------------------------------------------------------


def test_path_family_reaches_target_on_rich_instance():
    d = all_distinct_complete(22)
    fam = rainbow_path_family(d, 20, 21, range(20), range(d.kappa), 10)
    assert len(fam) == 10
    assert fam.verify(d, range(d.kappa))
    cols = {d.colour(u, v) for u, v in fam.edges()}
    assert len(cols) == 3 * len(fam)


def test_path_family_empty_pool():
    d = all_distinct_complete(5)
    assert len(rainbow_path_family(d, 0, 1, [], range(d.kappa), 3)) == 0


def test_path_family_rejects_equal_endpoints():
    d = all_distinct_complete(4)
    with pytest.raises(ValueError):
        rainbow_path_family(d, 1, 1, [2, 3], range(d.kappa), 1)


def test_path_family_interiors_stay_in_pool():
    d = all_distinct_complete(12)
    fam = rainbow_path_family(d, 0, 1, [4, 5, 6, 7], range(d.kappa), 2)
    assert len(fam) == 2
    for a, b in fam.members:
        assert {a, b} <= {4, 5, 6, 7}


def test_triangle_family_transitive_shape():
    d = all_distinct_complete(21)
    fam = rainbow_triangle_family(d, 20, range(20), range(d.kappa), 8,
                                  orientation="transitive")
    assert len(fam) == 8
    assert fam.verify(d)
    for i, (v1, v2) in enumerate(fam.members):
        assert fam.member_edges(i) == ((v1, 20), (20, v2), (v1, v2))


def test_triangle_family_cyclic_shape():
    d = all_distinct_complete(9)
    fam = rainbow_triangle_family(d, 0, range(1, 9), range(d.kappa), 2)
    assert len(fam) == 2
    for i, (x, y) in enumerate(fam.members):
        assert fam.member_edges(i) == ((0, x), (x, y), (y, 0))
    assert fam.verify(d)


def test_triangle_family_pool_too_small():
    d = all_distinct_complete(5)
    assert len(rainbow_triangle_family(d, 0, [1], range(d.kappa), 1)) == 0


def test_triangle_family_without_in_edges():
    edges = [(0, 1, 0), (0, 2, 1), (1, 2, 2)]
    d = ColouredDigraph.from_edges(3, 3, edges)
    fam = rainbow_triangle_family(d, 0, [1, 2], range(3), 1)
    assert len(fam) == 0


def test_family_verify_rejections():
    d = ColouredDigraph.from_edges(4, 2, [(0, 2, 0), (2, 3, 1), (3, 1, 1)])
    fam = PathFamily("path", (0, 1), ((2, 3),))
    verdict = fam.verify(d)
    assert verdict.violation.tag == "colour-repeat"
    missing = PathFamily("path", (0, 1), ((3, 2),))
    assert missing.verify(d).violation.tag == "missing-edge"
    outside = PathFamily("path", (0, 1), ((2, 3),))
    d2 = ColouredDigraph.from_edges(4, 3, [(0, 2, 0), (2, 3, 1), (3, 1, 2)])
    assert outside.verify(d2, colour_pool={0, 1}).violation.tag == "colour-outside-pool"


def test_family_member_validation():
    with pytest.raises(ValueError):
        PathFamily("path", (0, 0))
    with pytest.raises(ValueError):
        PathFamily("path", (0, 1), ((1, 2),))
    with pytest.raises(ValueError):
        PathFamily("cyclic-triangle", (0,), ((1, 2), (2, 3)))
    with pytest.raises(ValueError):
        PathFamily("nope", (0,))


def test_family_restarts_help_on_adversarial_order():
    # Ascending scan pairs interior 2 with 3 and strands 4, capping the
    # family at one member; processing 4 before 2 yields (4, 3) and (2, 5).
    # Shuffled restarts must find that order.
    edges = [(0, 2, 0), (2, 3, 1), (3, 1, 2), (2, 5, 3), (5, 1, 4),
             (0, 4, 5), (4, 3, 6)]
    d = ColouredDigraph.from_edges(6, 7, edges)
    assert len(rainbow_path_family(d, 0, 1, [2, 3, 4, 5], range(7), 2)) == 1
    fam = rainbow_path_family(d, 0, 1, [2, 3, 4, 5], range(7), 2,
                              rng=RngStream(1).child("fam"))
    assert len(fam) == 2
    assert fam.verify(d)
