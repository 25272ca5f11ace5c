"""
Subgraph containment, family-freeness, packings and packing families.
"""
import random

import networkx as nx
from networkx.algorithms import isomorphism

from errors import BudgetError, GraphError
from embedding import (
    GraphFamily,
    contains_subgraph,
    family_search,
    find_edge_disjoint,
    is_family_free,
    max_edge_disjoint_copies,
    packing_family,
    verify_embedding,
    verify_packing,
)
from families import BOWTIE
from graph_core import (
    are_isomorphic,
    complete_multipartite,
    disjoint_union,
    empty,
    random_graph,
    standard_graph,
    turan,
)

K3 = standard_graph("complete", 3)


def test_contains_basic():
    k33 = complete_multipartite([3, 3])
    outcome = contains_subgraph(k33, standard_graph("cycle", 4))
    assert outcome.found
    assert verify_embedding(k33, standard_graph("cycle", 4), outcome.embedding)
    assert contains_subgraph(turan(9, 2), K3).status == "absent"
    assert contains_subgraph(standard_graph("complete", 5), BOWTIE).found


def test_pattern_larger_than_host():
    try:
        contains_subgraph(K3, standard_graph("complete", 4))
    except GraphError:
        pass
    else:
        raise AssertionError("oversized pattern accepted")


def test_anchor_restricts_copies():
    # triangle on 0,1,2 plus a pendant vertex 3
    g = K3.add_vertex(0b001)
    assert contains_subgraph(g, K3, anchor=0).found
    assert contains_subgraph(g, K3, anchor=3).status == "absent"


def test_budget_reports_exhausted():
    outcome = contains_subgraph(turan(12, 2), K3, budget=1)
    assert outcome.status == "exhausted"
    try:
        is_family_free(turan(12, 2), GraphFamily.from_members("K3", [K3]), budget=1)
    except BudgetError:
        pass
    else:
        raise AssertionError("undecided freeness reported as a verdict")


def test_containment_agrees_with_networkx():
    rng = random.Random(17)
    patterns = [K3, standard_graph("cycle", 4), standard_graph("path", 4), BOWTIE]
    for _ in range(40):
        g = random_graph(rng.randint(5, 8), 0.45, rng)
        host = nx.Graph()
        host.add_nodes_from(range(g.n))
        host.add_edges_from(g.edges())
        for p in patterns:
            pat = nx.Graph(p.edges())
            expected = isomorphism.GraphMatcher(host, pat).subgraph_monomorphisms_iter()
            assert contains_subgraph(g, p).found == (next(expected, None) is not None)


def test_family_search_reports_member():
    fam = GraphFamily.from_members("{C5;K4}", [standard_graph("cycle", 5), standard_graph("complete", 4)])
    outcome = family_search(standard_graph("complete", 4), fam)
    assert outcome.found
    assert are_isomorphic(fam.members[outcome.member], standard_graph("complete", 4))
    assert is_family_free(standard_graph("cycle", 4), fam)


def test_edge_disjoint_triangles():
    k5 = standard_graph("complete", 5)
    outcome = find_edge_disjoint(k5, [K3, K3])
    assert outcome.found
    assert verify_packing(k5, [K3, K3], outcome.witness)
    assert find_edge_disjoint(standard_graph("complete", 4), [K3, K3]).status == "absent"
    t_plus_edge = turan(6, 2).add_edges([(0, 1)])
    assert find_edge_disjoint(t_plus_edge, [K3, K3]).status == "absent"


def test_oversized_packing_pattern_is_absent():
    assert find_edge_disjoint(K3, [standard_graph("complete", 4)]).status == "absent"
    assert find_edge_disjoint(standard_graph("complete", 4), [K3, standard_graph("star", 5)]).status == "absent"


def test_packing_ignores_pattern_order():
    rng = random.Random(29)
    p3 = standard_graph("path", 3)
    c4 = standard_graph("cycle", 4)
    for _ in range(25):
        g = random_graph(rng.randint(5, 7), 0.6, rng)
        patterns = [K3, p3, c4]
        expected = find_edge_disjoint(g, patterns).found
        for _ in range(3):
            rng.shuffle(patterns)
            outcome = find_edge_disjoint(g, patterns)
            assert outcome.found == expected
            if outcome.found:
                assert verify_packing(g, patterns, outcome.witness)


def test_containment_survives_edge_addition():
    rng = random.Random(31)
    patterns = [K3, standard_graph("cycle", 4), BOWTIE]
    for _ in range(40):
        g = random_graph(rng.randint(5, 7), 0.4, rng)
        missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
        if not missing:
            continue
        bigger = g.add_edges(rng.sample(missing, rng.randint(1, len(missing))))
        for p in patterns:
            if contains_subgraph(g, p).found:
                assert contains_subgraph(bigger, p).found


def test_max_edge_disjoint_copies():
    assert max_edge_disjoint_copies(standard_graph("complete", 4), K3) == 1
    assert max_edge_disjoint_copies(standard_graph("complete", 5), K3) == 2
    assert max_edge_disjoint_copies(empty(6), K3) == 0
    assert max_edge_disjoint_copies(standard_graph("complete", 7), K3) == 7


def test_packing_family_of_two_triangles():
    members = packing_family([K3, K3])
    assert len(members) == 2
    assert any(are_isomorphic(m, BOWTIE) for m in members)
    assert any(are_isomorphic(m, disjoint_union(K3, K3)) for m in members)


def test_packing_family_freeness_matches_members():
    fam = GraphFamily.from_members("G(K3,K3)", packing_family([K3, K3]), packing=[K3, K3])
    plain = GraphFamily.from_members("{bowtie;2K3}", packing_family([K3, K3]))
    rng = random.Random(23)
    for _ in range(30):
        g = random_graph(7, 0.5, rng)
        assert family_search(g, fam).found == family_search(g, plain).found


def test_family_metadata():
    fam = GraphFamily.from_members("{K3;C5}", [K3, standard_graph("cycle", 5)])
    assert fam.chi_family == 3
    assert fam.phi_family == 5
    assert fam.max_member_edges == 5


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
