"""
Graph values, constructors, canonical labelling and the graph6 codec.

networkx is the reference for isomorphism and graph6 text.
"""
import random

import networkx as nx

from errors import GraphError, ParseError
from graph_core import (
    are_isomorphic,
    canonical_form,
    canonical_key,
    complete_multipartite,
    disjoint_union,
    empty,
    join,
    parse_graph6,
    random_graph,
    random_permutation,
    standard_graph,
    to_graph6,
    turan,
    turan_part_sizes,
    with_edges,
)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def test_parse_known_graph6():
    k3 = parse_graph6("Bw")
    assert k3.n == 3 and k3.edge_count == 3
    k2 = parse_graph6("A_")
    assert k2.edges() == [(0, 1)]
    assert parse_graph6(">>graph6<<Bw") == k3


def test_graph6_matches_networkx():
    rng = random.Random(7)
    for n in (1, 5, 9, 30, 62):
        g = random_graph(n, 0.4, rng)
        expected = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
        assert to_graph6(g) == expected
        assert parse_graph6(expected) == g


def test_bad_graph6_is_a_parse_error():
    for text in ("", "B", "Bw!", "~~"):
        try:
            parse_graph6(text)
        except ParseError:
            continue
        raise AssertionError(f"{text!r} parsed")


def test_turan_sizes_and_counts():
    assert turan_part_sizes(8, 3) == [3, 3, 2]
    assert turan(8, 3).edge_count == 21
    assert turan(9, 3).edge_count == 27
    assert turan(7, 2).edge_count == 12
    assert complete_multipartite([3, 4]).edge_count == 12
    try:
        turan(3, 4)
    except GraphError:
        pass
    else:
        raise AssertionError("T_{3,4} accepted")


def test_join_and_union():
    c4 = standard_graph("cycle", 4)
    w5 = join(empty(1), c4)
    assert w5.n == 5 and w5.edge_count == 8
    assert are_isomorphic(w5, standard_graph("wheel", 5))
    two_triangles = disjoint_union(standard_graph("complete", 3), standard_graph("complete", 3))
    assert two_triangles.n == 6 and two_triangles.edge_count == 6
    assert not two_triangles.is_connected()


def test_edge_edits_are_pure():
    g = empty(4)
    h = g.add_edges([(0, 1), (2, 3)])
    assert g.edge_count == 0
    assert h.edge_count == 2
    assert h.remove_edges([(1, 0)]).edges() == [(2, 3)]
    try:
        g.add_edges([(1, 1)])
    except GraphError:
        pass
    else:
        raise AssertionError("loop accepted")


def test_spanning_subgraph_and_induced():
    t = turan(6, 2)
    assert t.remove_edges([(0, 3)]).is_spanning_subgraph_of(t)
    assert not t.add_edges([(0, 1)]).is_spanning_subgraph_of(t)
    assert t.induced([0, 1, 3]).edge_count == 2
    assert len(t.components()) == 1


def test_canonical_key_is_label_invariant():
    rng = random.Random(11)
    for _ in range(40):
        g = random_graph(rng.randint(1, 10), rng.random(), rng)
        h = random_permutation(g, rng)
        assert canonical_key(g) == canonical_key(h)
        assert parse_graph6(canonical_key(g)) == canonical_form(g)


def test_isomorphism_agrees_with_networkx():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(4, 8)
        g = random_graph(n, 0.5, rng)
        h = random_graph(n, 0.5, rng)
        assert are_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_regular_graphs_are_separated():
    # C6 and two triangles are both 2-regular on 6 vertices
    c6 = standard_graph("cycle", 6)
    tt = with_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_key(c6) != canonical_key(tt)
    # K_{3,3} and the prism are both 3-regular
    prism = with_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    assert not are_isomorphic(complete_multipartite([3, 3]), prism)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
