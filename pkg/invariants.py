"""
Exact scalar invariants: chromatic number, colour-criticality, clique and
matching numbers, maximum degree, and the Chvatal-Hanson edge bound.
"""

from __future__ import annotations

import itertools
import logging
from math import comb
from typing import Optional

from errors import BudgetError, DomainError, GraphError
from graph_core import Edge, Graph, bits, canonical_key, empty, turan_part_sizes
from models import InvariantBundle

logger = logging.getLogger(__name__)

CHROMATIC_MAX_VERTICES = 16


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def clique_number(g: Graph) -> int:
    """Size of a maximum clique (bitmask branch and bound)."""
    best = 0

    def expand(size: int, candidates: int) -> None:
        nonlocal best
        if not candidates:
            best = max(best, size)
            return
        while candidates:
            if size + candidates.bit_count() <= best:
                return
            v = candidates.bit_length() - 1
            candidates &= ~(1 << v)
            expand(size + 1, candidates & g.adj[v])

    expand(0, g.full_mask)
    return best


def _greedy_colour_count(g: Graph) -> int:
    """DSATUR upper bound."""
    colour = [-1] * g.n
    for _ in range(g.n):
        best_v, best_key = -1, None
        for v in range(g.n):
            if colour[v] >= 0:
                continue
            seen = {colour[w] for w in bits(g.adj[v]) if colour[w] >= 0}
            key = (len(seen), g.degree(v))
            if best_key is None or key > best_key:
                best_v, best_key = v, key
        used = {colour[w] for w in bits(g.adj[best_v])}
        c = 0
        while c in used:
            c += 1
        colour[best_v] = c
    return max(colour, default=-1) + 1


def _is_colourable(g: Graph, k: int) -> bool:
    """Backtracking k-colouring over colour-class bitmasks.

    The most constrained vertex is coloured first and a fresh class is only
    ever opened at the next unused index, which removes class permutations.
    """
    classes = [0] * k

    def solve(uncoloured: int, opened: int) -> bool:
        if not uncoloured:
            return True
        pick, pick_free = -1, None
        for v in bits(uncoloured):
            free = [c for c in range(opened) if not classes[c] & g.adj[v]]
            if pick_free is None or len(free) < len(pick_free):
                pick, pick_free = v, free
        options = list(pick_free)
        if opened < k:
            options.append(opened)
        for c in options:
            classes[c] |= 1 << pick
            if solve(uncoloured & ~(1 << pick), max(opened, c + 1)):
                return True
            classes[c] &= ~(1 << pick)
        return False

    return solve(g.full_mask, 0)


def chromatic_number(g: Graph) -> int:
    """Least r such that ``g`` has a proper r-colouring.

    Iterative deepening from the clique number up to the DSATUR bound.

    Raises:
        BudgetError: if ``g`` has more than 16 vertices.
    """
    if g.n > CHROMATIC_MAX_VERTICES:
        raise BudgetError(
            f"chromatic_number supports at most {CHROMATIC_MAX_VERTICES} vertices, got {g.n}"
        )
    if g.n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    lower = clique_number(g)
    upper = _greedy_colour_count(g)
    for k in range(lower, upper):
        if _is_colourable(g, k):
            return k
    return upper


def color_critical_edge(g: Graph) -> Optional[Edge]:
    """An edge whose removal lowers the chromatic number, or None.

    Raises:
        DomainError: if ``g`` has no edges.
    """
    if g.edge_count == 0:
        raise DomainError("Colour-criticality is vacuous for an edgeless graph")
    chi = chromatic_number(g)
    for edge in g.edges():
        if chromatic_number(g.remove_edges([edge])) < chi:
            # removing one edge lowers chi by at most one
            if chromatic_number(g.remove_edges([edge])) != chi - 1:
                raise AssertionError(f"Witness edge {edge} failed re-verification")
            return edge
    return None


def is_color_critical(g: Graph) -> bool:
    return color_critical_edge(g) is not None


# ── Matching ────────────────────────────────────────────────────────


def _augment_from(adj: tuple[int, ...], match: list[int], root: int) -> bool:
    """Grow an alternating forest from ``root``; augment ``match`` if a path exists."""
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = [root]

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for to in bits(adj[v]):
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                # odd cycle: contract the blossom onto its base
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    while to != -1:
                        pv = parent[to]
                        nxt = match[pv]
                        match[to], match[pv] = pv, to
                        to = nxt
                    return True
                used[match[to]] = True
                queue.append(match[to])
    return False


def maximum_matching(g: Graph) -> list[Edge]:
    """A maximum matching of ``g`` as sorted ``(u, v)`` pairs."""
    match = [-1] * g.n
    for v in range(g.n):
        if match[v] == -1:
            for u in bits(g.adj[v]):
                if match[u] == -1:
                    match[v], match[u] = u, v
                    break
    for root in range(g.n):
        if match[root] == -1:
            _augment_from(g.adj, match, root)
    return [(v, u) for v, u in enumerate(match) if v < u]


def matching_number(g: Graph) -> int:
    return len(maximum_matching(g))


# ── Counting formulas ───────────────────────────────────────────────


def chvatal_hanson(nu: int, delta: int) -> int:
    """f(nu, delta) = nu*delta + floor(delta/2) * floor(nu / ceil(delta/2)).

    The maximum number of edges of a graph with matching number at most
    ``nu`` and maximum degree at most ``delta``.
    """
    if nu < 1 or delta < 1:
        raise DomainError(f"chvatal_hanson needs positive arguments, got ({nu}, {delta})")
    return nu * delta + (delta // 2) * (nu // ((delta + 1) // 2))


def turan_edge_count(n: int, r: int) -> int:
    """e(T_{n,r}) without building the graph."""
    if not 1 <= r <= n:
        raise GraphError(f"turan_edge_count needs 1 <= r <= n, got n={n}, r={r}")
    return comb(n, 2) - sum(comb(size, 2) for size in turan_part_sizes(n, r))


def invariant_bundle(g: Graph) -> InvariantBundle:
    return InvariantBundle(
        chi=chromatic_number(g),
        nu=matching_number(g),
        delta_max=max_degree(g),
        edge_count=g.edge_count,
    )


def max_edges_bounded(nu: int, delta: int, max_vertices: int = 10) -> int:
    """Brute-force max e(G) over graphs with nu(G) <= nu, Delta(G) <= delta.

    Enumerates graphs on up to ``max_vertices`` vertices up to isomorphism by
    adding one vertex at a time, only ever joining it to vertices that still
    have spare degree. Both constraints survive vertex deletion, so every
    qualifying graph is reached.
    """
    level = [empty(0)]
    best = 0
    for j in range(1, max_vertices + 1):
        seen: dict[str, Graph] = {}
        for parent in level:
            open_vertices = [w for w in range(parent.n) if parent.degree(w) < delta]
            for size in range(0, min(delta, len(open_vertices)) + 1):
                for chosen in itertools.combinations(open_vertices, size):
                    mask = 0
                    for w in chosen:
                        mask |= 1 << w
                    child = parent.add_vertex(mask)
                    if matching_number(child) > nu:
                        continue
                    key = canonical_key(child)
                    if key not in seen:
                        seen[key] = child
        level = list(seen.values())
        best = max(best, max(g.edge_count for g in level))
        logger.debug(f"max_edges_bounded({nu}, {delta}): level {j} has {len(level)} graphs, best {best}")
    return best
