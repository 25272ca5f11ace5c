"""
Spectral radius, spex(n, H) and the Perron-vector checks.

numpy's symmetric eigensolver is the reference for rho.
"""
import math
import random

import numpy as np
import pytest

from constructions import spex_construction, turan_plus_edges
from errors import BudgetError, DomainError, GraphError
from families import parse_family
from graph_core import canonical_key, complete_multipartite, disjoint_union, empty, random_graph, standard_graph, turan
from invariants import max_degree
from models import Partition
from spectral import (
    TOL,
    adjacency_matrix,
    compositions,
    construction_gap_check,
    eigen_identity_residual,
    empirical_gamma,
    multipartite_gap_check,
    perron_part_order,
    perron_part_sum_bounds,
    rayleigh_lower_bound,
    spectral_radius,
    spex_search,
    stanley_upper_bound,
    star_vs_triangle_gap,
    swap_pairs,
)


def test_known_radii():
    assert abs(spectral_radius(standard_graph("complete", 5)).rho - 4) < 1e-10
    assert abs(spectral_radius(complete_multipartite([3, 4])).rho - math.sqrt(12)) < 1e-10
    assert abs(spectral_radius(standard_graph("cycle", 5)).rho - 2) < 1e-10
    assert spectral_radius(empty(3)).rho == 0


def test_radius_matches_numpy():
    rng = random.Random(9)
    for _ in range(30):
        g = random_graph(rng.randint(2, 12), rng.uniform(0.2, 0.8), rng)
        if g.edge_count == 0:
            continue
        report = spectral_radius(g)
        expected = float(np.linalg.eigvalsh(adjacency_matrix(g))[-1])
        assert abs(report.rho - expected) < 1e-9
        assert report.residual <= TOL
        assert rayleigh_lower_bound(g) <= report.rho + 1e-9 <= stanley_upper_bound(g.edge_count) + 2e-9


def test_disconnected_graph_uses_best_component():
    g = disjoint_union(standard_graph("path", 2), standard_graph("complete", 4))
    report = spectral_radius(g)
    assert abs(report.rho - 3) < 1e-10
    assert report.perron[0] == 0 and report.perron[1] == 0
    assert all(v > 0 for v in report.perron[2:])


def test_radius_input_errors():
    try:
        spectral_radius(empty(0))
    except GraphError:
        pass
    else:
        raise AssertionError("empty vertex set accepted")


def test_spex_small_cases():
    report = spex_search(4, parse_family("K3"))
    assert report.spex_set == [canonical_key(standard_graph("cycle", 4))]
    assert abs(report.rho_star - 2) < 1e-9
    assert report.within_ex and report.complete

    report = spex_search(7, parse_family("K3"))
    assert report.spex_set == [canonical_key(complete_multipartite([3, 4]))]
    assert report.ex_value == 12


def test_spex_two_triangles():
    report = spex_search(6, parse_family("G(K3,K3)"))
    expected, _ = spex_construction(6, 2, 2)
    assert report.spex_set == [canonical_key(expected)]
    assert report.within_ex


@pytest.mark.slow
def test_spex_two_triangles_seven_vertices():
    report = spex_search(7, parse_family("G(K3,K3)"))
    # one edge inside the part of size 3
    expected, _ = spex_construction(7, 2, 2)
    assert report.spex_set == [canonical_key(expected)]
    assert report.within_ex and report.complete
    assert report.ex_value == 13


def test_spex_size_limit():
    try:
        spex_search(10, parse_family("K3"))
    except BudgetError:
        pass
    else:
        raise AssertionError("n = 10 accepted")


def test_adding_an_edge_raises_radius():
    rng = random.Random(41)
    checked = 0
    while checked < 200:
        g = random_graph(rng.randint(3, 9), rng.uniform(0.3, 0.8), rng)
        missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
        if not g.is_connected() or not missing:
            continue
        h = g.add_edges([rng.choice(missing)])
        rho_g = spectral_radius(g).rho
        rho_h = spectral_radius(h).rho
        assert rho_h > rho_g + 1e-10
        for graph, rho in ((g, rho_g), (h, rho_h)):
            assert rho <= max_degree(graph) + 1e-9
            assert rho <= math.sqrt(2 * graph.edge_count) + 1e-9
            assert rho >= rayleigh_lower_bound(graph) - 1e-9
        checked += 1


def test_compositions():
    assert compositions(5, 2) == [[4, 1], [3, 2]]
    assert all(sum(c) == 9 and len(c) == 3 for c in compositions(9, 3))


def test_balanced_multipartite_wins():
    gaps = multipartite_gap_check(7, 2)
    assert [sizes for sizes, _ in gaps] == [[6, 1], [5, 2]]
    assert abs(dict((tuple(s), g) for s, g in gaps)[(5, 2)] - (math.sqrt(12) - math.sqrt(10))) < 1e-9
    assert all(gap > 0 for _, gap in gaps)
    assert empirical_gamma(7, gaps) > 0
    assert empirical_gamma(4, []) is None


def test_construction_gain():
    assert construction_gap_check(10, 2, 1)
    assert construction_gap_check(12, 3, 2)
    assert construction_gap_check(8, 2, 0)


def test_eigen_identity():
    rng = random.Random(1)
    for _, g, h in swap_pairs(9, 2):
        assert eigen_identity_residual(g, h) < 1e-8
    done = 0
    while done < 10:
        g = random_graph(8, 0.6, rng)
        h = random_graph(8, 0.6, rng)
        if g.is_connected() and h.is_connected():
            assert eigen_identity_residual(g, h) < 1e-8
            done += 1
    try:
        eigen_identity_residual(turan(4, 2), turan(5, 2))
    except GraphError:
        pass
    else:
        raise AssertionError("different orders accepted")


def test_part_sum_bounds():
    for n, r, k in ((9, 2, 2), (8, 2, 1), (10, 3, 3), (12, 3, 4)):
        gstar, partition = spex_construction(n, r, k)
        assert perron_part_sum_bounds(gstar, partition, k), (n, r, k)
        assert perron_part_order(gstar, partition)


def test_part_sum_bounds_reject_bad_frame():
    g = turan(6, 2)
    wrong = Partition.from_sizes([2, 2, 2])
    try:
        perron_part_sum_bounds(g, wrong, 1)
    except GraphError:
        pass
    else:
        raise AssertionError("partition that does not fit accepted")


def test_triangle_beats_star():
    for n, r in ((9, 2), (12, 3), (10, 2)):
        assert star_vs_triangle_gap(n, r) > 0


def test_star_needs_room():
    try:
        turan_plus_edges(5, 2, 3, "star", 1)
    except DomainError:
        pass
    else:
        raise AssertionError("oversized star accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
