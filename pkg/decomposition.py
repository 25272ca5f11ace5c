"""
Decomposition family M(H) and the matching/star condition on it.

M qualifies when some H in the family embeds in (M u E_phi) + T_{(r-1)phi, r-1}.
Qualification is monotone under taking subgraphs of M, so candidates are
visited by increasing edge count and any candidate containing an accepted
member is skipped as non-minimal.
"""

from __future__ import annotations

import itertools
import logging
from typing import Optional

from embedding import GraphFamily, contains_subgraph, verify_embedding
from errors import BudgetError, DomainError
from graph_core import (
    Graph,
    are_isomorphic,
    canonical_form,
    canonical_key,
    disjoint_union,
    empty,
    join,
    parse_graph6,
    standard_graph,
    to_graph6,
    turan,
)
from models import DecompositionReport, MembershipWitness

logger = logging.getLogger(__name__)

PHI_MAX = 8


def decomposition_host(m: Graph, r: int, phi: int) -> Graph:
    """(M u E_phi) + T_{(r-1)phi, r-1}."""
    return join(disjoint_union(m, empty(phi)), turan((r - 1) * phi, r - 1))


def candidate_graphs(max_vertices: int, max_edges: int) -> list[Graph]:
    """Isolated-vertex-free graphs with bounded order and size, up to isomorphism.

    Grown one vertex at a time; a bounded edge count survives vertex
    deletion, so intermediate levels may keep isolated vertices.
    """
    level = [empty(0)]
    found: dict[str, Graph] = {}
    for _ in range(max_vertices):
        seen: dict[str, Graph] = {}
        for parent in level:
            room = max_edges - parent.edge_count
            for size in range(0, min(room, parent.n) + 1):
                for chosen in itertools.combinations(range(parent.n), size):
                    mask = 0
                    for w in chosen:
                        mask |= 1 << w
                    child = parent.add_vertex(mask)
                    seen.setdefault(canonical_key(child), child)
        level = list(seen.values())
        for g in level:
            if g.edge_count and all(g.adj):
                found.setdefault(canonical_key(g), canonical_form(g))
    return sorted(found.values(), key=lambda g: (g.edge_count, g.n, canonical_key(g)))


def _qualifying_witness(
    m: Graph, fam: GraphFamily, r: int, phi: int
) -> Optional[MembershipWitness]:
    host = decomposition_host(m, r, phi)
    for h in fam.members:
        outcome = contains_subgraph(host, h)
        if outcome.found:
            if not verify_embedding(host, h, outcome.embedding):
                raise AssertionError("Decomposition witness failed re-verification")
            return MembershipWitness(
                member=to_graph6(m),
                forbidden=to_graph6(h),
                host=to_graph6(host),
                embedding=list(outcome.embedding),
            )
    return None


def _contains(big: Graph, small: Graph) -> bool:
    return small.n <= big.n and small.edge_count <= big.edge_count and contains_subgraph(big, small).found


def _certify_minimal(members: list[Graph], fam: GraphFamily, r: int, phi: int) -> bool:
    """No single-edge deletion of a member (isolated vertices stripped) qualifies."""
    for m in members:
        for edge in m.edges():
            smaller = m.remove_edges([edge]).strip_isolated()
            if smaller.edge_count and _qualifying_witness(smaller, fam, r, phi) is not None:
                logger.warning(f"Member {to_graph6(m)} is not minimal: {to_graph6(smaller)} qualifies")
                return False
            if smaller.edge_count == 0 and _qualifying_witness(empty(0), fam, r, phi) is not None:
                return False
    return True


def decomposition_family(fam: GraphFamily, certify: bool = True) -> DecompositionReport:
    """Compute M(H) for a family with chi(H) = r + 1 >= 3.

    Raises:
        DomainError: if chi(H) <= 2.
        BudgetError: if phi(H) exceeds 8.
    """
    chi = fam.chi_family
    if chi <= 2:
        raise DomainError(f"Decomposition family needs chi(H) >= 3, {fam.name} has chi = {chi}")
    phi = fam.phi_family
    if phi > PHI_MAX:
        raise BudgetError(f"Decomposition family supports phi <= {PHI_MAX}, {fam.name} has phi = {phi}")
    r = chi - 1

    candidates = candidate_graphs(phi, fam.max_member_edges)
    logger.info(f"decomposition_family({fam.name}): r={r}, phi={phi}, {len(candidates)} candidates")

    members: list[Graph] = []
    witnesses: list[MembershipWitness] = []
    for m in candidates:
        if any(_contains(m, known) for known in members):
            continue
        witness = _qualifying_witness(m, fam, r, phi)
        if witness is not None:
            members.append(m)
            witnesses.append(witness)

    certified = _certify_minimal(members, fam, r, phi) if certify else False
    antichain = not any(
        a is not b and _contains(b, a) for a, b in itertools.permutations(members, 2)
    )
    if not antichain:
        raise AssertionError(f"Decomposition family of {fam.name} is not an antichain")

    nu_star, delta_star, verdict = _scan_matchings_and_stars(members, phi)
    return DecompositionReport(
        family=fam.name,
        r=r,
        phi=phi,
        family_M=[to_graph6(m) for m in members],
        witnesses=witnesses,
        nu_star=nu_star,
        delta_star=delta_star,
        condition_ii=verdict,
        candidates_checked=len(candidates),
        minimality_certified=certified,
    )


def _scan_matchings_and_stars(
    members: list[Graph], phi: int
) -> tuple[Optional[int], Optional[int], bool]:
    nu_star = next(
        (nu for nu in range(1, phi // 2 + 1)
         if any(are_isomorphic(m, standard_graph("matching", 2 * nu)) for m in members)),
        None,
    )
    delta_star = next(
        (d for d in range(1, phi + 1)
         if any(are_isomorphic(m, standard_graph("star", d + 1)) for m in members)),
        None,
    )
    return nu_star, delta_star, nu_star is not None and delta_star is not None


def condition_ii(
    report_or_family: DecompositionReport | GraphFamily,
) -> tuple[Optional[int], Optional[int], bool]:
    """(nu*, Delta*, verdict): M_{2nu}, S_{Delta+1} in M(H) with nu <= phi/2, Delta <= phi."""
    if isinstance(report_or_family, GraphFamily):
        report = decomposition_family(report_or_family)
    else:
        report = report_or_family
    members = [parse_graph6(s) for s in report.family_M]
    return _scan_matchings_and_stars(members, report.phi)
