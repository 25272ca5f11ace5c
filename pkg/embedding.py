"""
Subgraph containment, family-freeness and edge-disjoint packings.

Containment is the ordinary (not induced) subgraph relation. Searches
accept an optional step budget; running out of steps is reported as
``exhausted``, distinct from ``absent``.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional, Sequence

from errors import BudgetError, DomainError, GraphError
from graph_core import Edge, Graph, bits, canonical_form, canonical_key, disjoint_union
from invariants import chromatic_number
from models import PackingWitness

logger = logging.getLogger(__name__)

PATTERN_MAX_VERTICES = 16

Status = Literal["found", "absent", "exhausted"]


class _Exhausted(Exception):
    pass


@dataclass
class SearchOutcome:
    """Result of a bounded search: a witness, a proof of absence, or neither."""
    status: Status
    embedding: Optional[tuple[int, ...]] = None
    witness: Optional[PackingWitness] = None
    member: Optional[int] = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


@dataclass(frozen=True)
class GraphFamily:
    """A finite family of forbidden graphs.

    Attributes:
        name: Human-readable id (the family expression it was parsed from).
        members: Canonical, pairwise non-isomorphic members.
        chi_family: Smallest member chromatic number.
        phi_family: Largest member order.
        packing: For G(F_1..F_k) families, the graphs F_i; freeness can then
            be decided by an edge-disjoint packing search.
    """
    name: str
    members: tuple[Graph, ...]
    chi_family: int
    phi_family: int
    packing: Optional[tuple[Graph, ...]] = field(default=None)

    @classmethod
    def from_members(
        cls, name: str, members: Sequence[Graph], packing: Optional[Sequence[Graph]] = None
    ) -> "GraphFamily":
        if not members:
            raise DomainError(f"Family {name!r} has no members")
        unique: dict[str, Graph] = {}
        for g in members:
            unique.setdefault(canonical_key(g), canonical_form(g))
        ordered = tuple(unique[k] for k in sorted(unique))
        return cls(
            name=name,
            members=ordered,
            chi_family=min(chromatic_number(g) for g in ordered),
            phi_family=max(g.n for g in ordered),
            packing=tuple(packing) if packing else None,
        )

    @property
    def max_member_edges(self) -> int:
        return max(g.edge_count for g in self.members)

    @property
    def content_key(self) -> str:
        """Digest of the canonical members and packing patterns, independent of ``name``."""
        digest = hashlib.sha256()
        for g in self.members:
            digest.update(canonical_key(g).encode() + b"\n")
        if self.packing is not None:
            digest.update(b"packing\n")
            for key in sorted(canonical_key(p) for p in self.packing):
                digest.update(key.encode() + b"\n")
        return digest.hexdigest()[:16]


# ── Single-pattern containment ──────────────────────────────────────


def _search_order(pattern: Graph, first: Optional[int] = None) -> list[int]:
    """Pattern vertices ordered for backtracking.

    Starts at ``first`` (or a maximum-degree vertex) and then repeatedly takes
    the vertex with the most already-ordered neighbours, ties broken by
    degree, so each new vertex is constrained by earlier choices.
    """
    remaining = set(range(pattern.n))
    if first is None:
        first = max(remaining, key=lambda v: (pattern.degree(v), -v))
    order = [first]
    remaining.discard(first)
    placed = 1 << first
    while remaining:
        v = max(
            remaining,
            key=lambda u: ((pattern.adj[u] & placed).bit_count(), pattern.degree(u), -u),
        )
        order.append(v)
        remaining.discard(v)
        placed |= 1 << v
    return order


class _Matcher:
    """Backtracking subgraph matcher with forward checking.

    Host candidates for a pattern vertex are the common host neighbourhood of
    its already-mapped pattern neighbours, restricted to host vertices of
    large enough degree. After each assignment every unmapped vertex must
    keep a candidate and no group of unmapped vertices may be confined to
    fewer host vertices than its size.
    """

    def __init__(self, host: Graph, pattern: Graph, budget: Optional[int] = None):
        self.host = host
        self.pattern = pattern
        self.budget = budget
        self.nodes = 0
        host_deg = host.degrees()
        self.degree_ok = []
        for p in range(pattern.n):
            need = pattern.degree(p)
            mask = 0
            for h in range(host.n):
                if host_deg[h] >= need:
                    mask |= 1 << h
            self.degree_ok.append(mask)

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Exhausted()

    def embeddings(
        self, order: list[int], fixed: Optional[dict[int, int]] = None,
        forbidden_edges: Optional[Sequence[int]] = None,
    ) -> Iterator[tuple[int, ...]]:
        """All embeddings consistent with ``fixed``, in lexicographic order of choices.

        ``forbidden_edges`` (one mask per host vertex) removes host edges from
        consideration, which is how packings mask edges already used.
        """
        host_adj = self.host.adj
        if forbidden_edges is not None:
            host_adj = tuple(a & ~f for a, f in zip(host_adj, forbidden_edges))
        p_adj = self.pattern.adj
        mapping = [-1] * self.pattern.n
        fixed = fixed or {}
        full = self.host.full_mask

        def candidates(p: int, used: int) -> int:
            mask = self.degree_ok[p] & ~used & full
            for q in bits(p_adj[p]):
                if mapping[q] >= 0:
                    mask &= host_adj[mapping[q]]
            return mask

        def viable(i: int, used: int) -> bool:
            pending = []
            for p in order[i:]:
                if not p_adj[p] or all(mapping[q] < 0 for q in bits(p_adj[p])):
                    continue
                c = candidates(p, used)
                if not c:
                    return False
                pending.append(c)
            for m in set(pending):
                if sum(1 for c in pending if c & ~m == 0) > m.bit_count():
                    return False
            return True

        def extend(i: int, used: int) -> Iterator[tuple[int, ...]]:
            if i == len(order):
                yield tuple(mapping)
                return
            p = order[i]
            mask = candidates(p, used)
            if p in fixed:
                mask &= 1 << fixed[p]
            for h in bits(mask):
                self._tick()
                mapping[p] = h
                if viable(i + 1, used | (1 << h)):
                    yield from extend(i + 1, used | (1 << h))
                mapping[p] = -1

        yield from extend(0, 0)


def verify_embedding(host: Graph, pattern: Graph, embedding: Sequence[int]) -> bool:
    """Direct bit test: injective and every pattern edge lands on a host edge."""
    if len(embedding) != pattern.n or len(set(embedding)) != pattern.n:
        return False
    if any(not 0 <= h < host.n for h in embedding):
        return False
    return all(host.has_edge(embedding[u], embedding[v]) for u, v in pattern.edges())


def _check_sizes(host: Graph, pattern: Graph) -> None:
    if pattern.n > PATTERN_MAX_VERTICES:
        raise BudgetError(f"Patterns are limited to {PATTERN_MAX_VERTICES} vertices, got {pattern.n}")
    if pattern.n > host.n:
        raise GraphError(f"Pattern on {pattern.n} vertices cannot fit a host on {host.n}")


def contains_subgraph(
    host: Graph,
    pattern: Graph,
    anchor: Optional[int] = None,
    budget: Optional[int] = None,
) -> SearchOutcome:
    """Search for a copy of ``pattern`` in ``host``.

    Args:
        host: Host graph.
        pattern: Pattern graph, at most 16 vertices and no larger than host.
        anchor: If given, only copies using this host vertex are considered.
        budget: Optional cap on search nodes.

    Raises:
        GraphError: if the pattern has more vertices than the host.
    """
    _check_sizes(host, pattern)
    if pattern.edge_count > host.edge_count:
        return SearchOutcome("absent")
    matcher = _Matcher(host, pattern, budget)
    if anchor is None:
        starts: list[tuple[list[int], dict[int, int]]] = [(_search_order(pattern), {})]
    else:
        anchor_degree = host.degree(anchor)
        starts = [
            (_search_order(pattern, first=p), {p: anchor})
            for p in range(pattern.n)
            if pattern.degree(p) <= anchor_degree
        ]
    try:
        for order, fixed in starts:
            for emb in matcher.embeddings(order, fixed):
                if not verify_embedding(host, pattern, emb):
                    raise AssertionError(f"Embedding {emb} failed re-verification")
                return SearchOutcome("found", embedding=emb, nodes=matcher.nodes)
    except _Exhausted:
        logger.debug(f"contains_subgraph exhausted after {matcher.nodes} nodes")
        return SearchOutcome("exhausted", nodes=matcher.nodes)
    return SearchOutcome("absent", nodes=matcher.nodes)


def family_search(
    host: Graph,
    fam: GraphFamily,
    anchor: Optional[int] = None,
    budget: Optional[int] = None,
) -> SearchOutcome:
    """Find any member of ``fam`` in ``host``; ``member`` indexes the hit.

    Members larger than the host are skipped. A G(F_1..F_k) family without
    an anchor is decided by a packing search instead of per-member search.
    """
    if fam.packing is not None and anchor is None:
        outcome = find_edge_disjoint(host, list(fam.packing), budget=budget)
        if outcome.found:
            outcome.member = -1
        return outcome
    nodes = 0
    exhausted = False
    for i, member in enumerate(fam.members):
        if member.n > host.n:
            continue
        remaining = None if budget is None else max(budget - nodes, 0)
        outcome = contains_subgraph(host, member, anchor=anchor, budget=remaining)
        nodes += outcome.nodes
        if outcome.found:
            outcome.member = i
            outcome.nodes = nodes
            return outcome
        exhausted = exhausted or outcome.status == "exhausted"
    return SearchOutcome("exhausted" if exhausted else "absent", nodes=nodes)


def is_family_free(
    host: Graph,
    fam: GraphFamily,
    anchor: Optional[int] = None,
    budget: Optional[int] = None,
) -> bool:
    """True iff no member of ``fam`` is a subgraph of ``host``.

    Raises:
        BudgetError: if the step budget ran out before a decision.
    """
    outcome = family_search(host, fam, anchor=anchor, budget=budget)
    if outcome.status == "exhausted":
        raise BudgetError(f"Freeness of {fam.name} undecided within {budget} steps")
    return not outcome.found


# ── Edge-disjoint packings ──────────────────────────────────────────


def _edge_set(pattern: Graph, emb: Sequence[int]) -> tuple[Edge, ...]:
    return tuple(sorted((min(emb[u], emb[v]), max(emb[u], emb[v])) for u, v in pattern.edges()))


def verify_packing(host: Graph, patterns: Sequence[Graph], witness: PackingWitness) -> bool:
    """Edge preservation, injectivity and pairwise edge-disjointness."""
    if len(witness.vertex_maps) != len(patterns):
        return False
    seen: set[Edge] = set()
    for pattern, vmap, copy in zip(patterns, witness.vertex_maps, witness.copies):
        if not verify_embedding(host, pattern, vmap):
            return False
        edges = set(_edge_set(pattern, vmap))
        if edges != {tuple(e) for e in copy} or edges & seen:
            return False
        seen |= edges
    return True


def find_edge_disjoint(
    host: Graph, patterns: Sequence[Graph], budget: Optional[int] = None
) -> SearchOutcome:
    """Pairwise edge-disjoint copies of every pattern, in input order.

    Copies of isomorphic patterns are interchangeable, so consecutive equal
    patterns must take lexicographically nondecreasing edge sets; each edge
    set is tried once per copy whatever the automorphism producing it.
    """
    for p in patterns:
        if p.n > PATTERN_MAX_VERTICES:
            raise BudgetError(f"Patterns are limited to {PATTERN_MAX_VERTICES} vertices, got {p.n}")
    if any(p.n > host.n for p in patterns) or sum(p.edge_count for p in patterns) > host.edge_count:
        return SearchOutcome("absent")
    if not patterns:
        return SearchOutcome("found", witness=PackingWitness(vertex_maps=[], copies=[]))

    keys = [canonical_key(p) for p in patterns]
    matchers = [_Matcher(host, p) for p in patterns]
    orders = [_search_order(p) for p in patterns]
    forbidden = [0] * host.n
    chosen: list[tuple[tuple[int, ...], tuple[Edge, ...]]] = []
    nodes = 0

    def place(i: int) -> bool:
        nonlocal nodes
        if i == len(patterns):
            return True
        lower = chosen[i - 1][1] if i > 0 and keys[i] == keys[i - 1] else None
        tried: set[tuple[Edge, ...]] = set()
        matcher = matchers[i]
        matcher.budget = None if budget is None else budget - nodes
        matcher.nodes = 0
        for emb in matcher.embeddings(orders[i], forbidden_edges=forbidden):
            es = _edge_set(patterns[i], emb)
            if es in tried or (lower is not None and es < lower):
                continue
            tried.add(es)
            nodes += matcher.nodes
            matcher.nodes = 0
            for u, v in es:
                forbidden[u] |= 1 << v
                forbidden[v] |= 1 << u
            chosen.append((emb, es))
            if place(i + 1):
                return True
            chosen.pop()
            for u, v in es:
                forbidden[u] &= ~(1 << v)
                forbidden[v] &= ~(1 << u)
            matcher.budget = None if budget is None else budget - nodes
        nodes += matcher.nodes
        matcher.nodes = 0
        return False

    try:
        ok = place(0)
    except _Exhausted:
        return SearchOutcome("exhausted", nodes=nodes)
    if not ok:
        return SearchOutcome("absent", nodes=nodes)
    witness = PackingWitness(
        vertex_maps=[list(emb) for emb, _ in chosen],
        copies=[list(es) for _, es in chosen],
    )
    if not verify_packing(host, patterns, witness):
        raise AssertionError("Packing witness failed re-verification")
    return SearchOutcome("found", witness=witness, nodes=nodes)


def _greedy_packing(host: Graph, pattern: Graph) -> int:
    count = 0
    remaining = host
    while pattern.edge_count <= remaining.edge_count:
        outcome = contains_subgraph(remaining, pattern)
        if not outcome.found:
            break
        remaining = remaining.remove_edges(_edge_set(pattern, outcome.embedding))
        count += 1
    return count


def max_edge_disjoint_copies(host: Graph, pattern: Graph, budget: Optional[int] = None) -> int:
    """Largest k such that ``host`` has k edge-disjoint copies of ``pattern``.

    Binary search on k between a greedy packing and floor(e(host)/e(pattern)).
    """
    if pattern.edge_count == 0:
        raise DomainError("Packing number of an edgeless pattern is unbounded")
    if pattern.n > host.n:
        return 0
    lo = _greedy_packing(host, pattern)
    hi = host.edge_count // pattern.edge_count
    while lo < hi:
        mid = (lo + hi + 1) // 2
        outcome = find_edge_disjoint(host, [pattern] * mid, budget=budget)
        if outcome.status == "exhausted":
            raise BudgetError(f"Packing of {mid} copies undecided within {budget} steps")
        if outcome.found:
            lo = mid
        else:
            hi = mid - 1
    return lo


def packing_family(patterns: Sequence[Graph]) -> list[Graph]:
    """All graphs made of pairwise edge-disjoint copies of the patterns.

    Each copy is glued onto the union built so far through every injective
    partial vertex identification that does not make two edges coincide;
    results are deduplicated up to isomorphism after each step.
    """
    if not patterns:
        raise DomainError("packing_family needs at least one pattern")
    first = patterns[0].strip_isolated()
    current = {canonical_key(first): canonical_form(first)}
    for f in patterns[1:]:
        f = f.strip_isolated()
        nxt: dict[str, Graph] = {}
        for g in current.values():
            base = disjoint_union(g, Graph(f.n, (0,) * f.n))
            f_edges = f.edges()
            for k in range(0, min(f.n, g.n) + 1):
                for sources in itertools.combinations(range(f.n), k):
                    for targets in itertools.permutations(range(g.n), k):
                        place = list(range(g.n, g.n + f.n))
                        for s, t in zip(sources, targets):
                            place[s] = t
                        mapped = [(min(place[u], place[v]), max(place[u], place[v])) for u, v in f_edges]
                        if any(base.has_edge(a, b) for a, b in mapped):
                            continue
                        union = base.add_edges(mapped).strip_isolated()
                        nxt.setdefault(canonical_key(union), canonical_form(union))
        current = nxt
        logger.debug(f"packing_family: {len(current)} unions after {f!r}")
    return [current[k] for k in sorted(current)]
