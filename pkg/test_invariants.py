"""
Chromatic number, colour-criticality, matching and the counting formulas.
"""
import random

import networkx as nx

from errors import BudgetError, DomainError
from families import BOWTIE
from graph_core import complete_multipartite, empty, random_graph, standard_graph, turan
from invariants import (
    chromatic_number,
    chvatal_hanson,
    clique_number,
    color_critical_edge,
    invariant_bundle,
    is_color_critical,
    matching_number,
    max_edges_bounded,
    maximum_matching,
    turan_edge_count,
)


def test_chromatic_numbers():
    assert chromatic_number(empty(3)) == 1
    assert chromatic_number(empty(0)) == 0
    assert chromatic_number(standard_graph("cycle", 5)) == 3
    assert chromatic_number(standard_graph("cycle", 6)) == 2
    assert chromatic_number(standard_graph("wheel", 6)) == 4
    assert chromatic_number(turan(9, 3)) == 3
    assert chromatic_number(BOWTIE) == 3
    assert chromatic_number(standard_graph("complete", 7)) == 7


def test_chromatic_number_rejects_large_graphs():
    try:
        chromatic_number(empty(17))
    except BudgetError:
        pass
    else:
        raise AssertionError("17 vertices accepted")


def test_clique_number():
    assert clique_number(turan(10, 4)) == 4
    assert clique_number(standard_graph("cycle", 7)) == 2


def test_color_criticality():
    assert is_color_critical(standard_graph("complete", 4))
    assert is_color_critical(standard_graph("cycle", 5))
    # W5 = K1 + C4 keeps a triangle after any deletion; W6 = K1 + C5 drops to 3 colours
    assert not is_color_critical(standard_graph("wheel", 5))
    assert is_color_critical(standard_graph("wheel", 6))
    assert not is_color_critical(BOWTIE)
    edge = color_critical_edge(standard_graph("cycle", 7))
    assert edge is not None
    try:
        color_critical_edge(empty(2))
    except DomainError:
        pass
    else:
        raise AssertionError("edgeless graph accepted")


def test_matching_agrees_with_networkx():
    rng = random.Random(5)
    for _ in range(80):
        g = random_graph(rng.randint(2, 14), rng.uniform(0.1, 0.6), rng)
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges())
        expected = len(nx.max_weight_matching(h, maxcardinality=True))
        matching = maximum_matching(g)
        assert len(matching) == expected
        covered = [v for e in matching for v in e]
        assert len(covered) == len(set(covered))
        assert all(g.has_edge(u, v) for u, v in matching)


def test_matching_on_odd_cycles():
    # blossom contraction is needed here
    assert matching_number(standard_graph("cycle", 9)) == 4
    assert matching_number(standard_graph("complete", 7)) == 3
    assert matching_number(standard_graph("star", 6)) == 1


def test_chvatal_hanson_values():
    assert chvatal_hanson(1, 2) == 3
    assert chvatal_hanson(2, 2) == 6
    assert chvatal_hanson(2, 3) == 7
    assert chvatal_hanson(1, 1) == 1


def test_chvatal_hanson_matches_brute_force():
    for nu, delta in ((1, 1), (1, 2), (2, 2), (2, 3)):
        assert max_edges_bounded(nu, delta, max_vertices=6) == chvatal_hanson(nu, delta)


def test_turan_edge_count():
    assert turan_edge_count(8, 2) == 16
    assert turan_edge_count(9, 3) == 27
    assert turan_edge_count(10, 3) == 33
    for n in range(2, 12):
        for r in range(1, n + 1):
            assert turan_edge_count(n, r) == turan(n, r).edge_count


def test_turan_graphs_need_r_colours():
    for n in range(1, 13):
        for r in range(1, n + 1):
            assert chromatic_number(turan(n, r)) == r, (n, r)


def test_turan_edge_count_lower_estimate():
    # e(T_{n,r}) >= (r - 1) n^2 / (2r) - r / 8, scaled by 8r
    for r in range(2, 7):
        for n in range(r, 41):
            assert 8 * r * turan_edge_count(n, r) >= 4 * (r - 1) * n * n - r * r, (n, r)


def test_invariant_bundle():
    bundle = invariant_bundle(complete_multipartite([3, 4]))
    assert (bundle.chi, bundle.nu, bundle.delta_max, bundle.edge_count) == (2, 3, 4, 12)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
