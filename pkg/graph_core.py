"""
Small immutable graphs on at most 64 vertices.

A graph is a vertex count plus one neighbourhood bitmask per vertex, so
set operations on neighbourhoods are single integer operations. All
constructors are pure and return new values.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from errors import BudgetError, GraphError, ParseError

logger = logging.getLogger(__name__)

MAX_VERTICES = 64
GRAPH6_HEADER = ">>graph6<<"

Edge = tuple[int, int]
EdgeList = list[Edge]


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, slots=True)
class Graph:
    """Undirected simple graph with a symmetric bit-matrix adjacency.

    Attributes:
        n: Number of vertices, labelled ``0 .. n-1``.
        adj: ``adj[i]`` is the neighbourhood of vertex ``i`` as a bitmask.
    """

    n: int
    adj: tuple[int, ...]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> EdgeList:
        """Edges as ``(u, v)`` pairs with ``u < v``, sorted."""
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def is_well_formed(self) -> bool:
        """Symmetric, loopless, and no bits at positions >= n."""
        if len(self.adj) != self.n or not 0 <= self.n <= MAX_VERTICES:
            return False
        full = self.full_mask
        for i, row in enumerate(self.adj):
            if row & ~full or row >> i & 1:
                return False
            for j in bits(row):
                if not self.adj[j] >> i & 1:
                    return False
        return True

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            _check_pair(self.n, u, v)
            if adj[u] >> v & 1:
                raise GraphError(f"Edge ({u}, {v}) already present")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def remove_edges(self, edges: Iterable[Edge]) -> "Graph":
        adj = list(self.adj)
        for u, v in edges:
            _check_pair(self.n, u, v)
            if not adj[u] >> v & 1:
                raise GraphError(f"Edge ({u}, {v}) not present")
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def add_vertex(self, neighbourhood: int) -> "Graph":
        """Append vertex ``n`` adjacent to the vertices in ``neighbourhood``."""
        if self.n >= MAX_VERTICES:
            raise BudgetError(f"Graph would exceed {MAX_VERTICES} vertices")
        v = self.n
        adj = [row | (1 << v) if neighbourhood >> i & 1 else row
               for i, row in enumerate(self.adj)]
        adj.append(neighbourhood)
        return Graph(v + 1, tuple(adj))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            row = 0
            for w in bits(self.adj[v]):
                if w in index:
                    row |= 1 << index[w]
            adj.append(row)
        return Graph(len(vertices), tuple(adj))

    def permute(self, perm: Sequence[int]) -> "Graph":
        """Relabel vertex ``i`` as ``perm[i]``."""
        adj = [0] * self.n
        for i, row in enumerate(self.adj):
            new_row = 0
            for j in bits(row):
                new_row |= 1 << perm[j]
            adj[perm[i]] = new_row
        return Graph(self.n, tuple(adj))

    def strip_isolated(self) -> "Graph":
        return self.induced([v for v in range(self.n) if self.adj[v]])

    def components(self) -> list[int]:
        """Vertex masks of the connected components, by lowest vertex."""
        seen = 0
        out = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                reach = 0
                for w in bits(frontier):
                    reach |= self.adj[w]
                frontier = reach & ~comp
                comp |= frontier
            seen |= comp
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def is_spanning_subgraph_of(self, other: "Graph") -> bool:
        """True if every edge of this graph is an edge of ``other`` (same labels)."""
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.edge_count}, g6={to_graph6(self)!r})"


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"Endpoint out of range in ({u}, {v}) for n={n}")
    if u == v:
        raise GraphError(f"Loop requested at vertex {u}")


def _check_order(n: int) -> None:
    if not 0 <= n <= MAX_VERTICES:
        raise BudgetError(f"Vertex count {n} outside 0..{MAX_VERTICES}")


# ── Constructors ────────────────────────────────────────────────────


def with_edges(n: int, edges: Iterable[Edge]) -> Graph:
    """Graph on ``n`` vertices with exactly the given edges.

    Raises:
        GraphError: on an out-of-range endpoint, a loop, or a duplicate edge.
    """
    _check_order(n)
    return Graph(n, (0,) * n).add_edges(edges)


def empty(n: int) -> Graph:
    _check_order(n)
    return Graph(n, (0,) * n)


def complete_multipartite(part_sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph with consecutive vertex blocks as parts."""
    if any(size < 1 for size in part_sizes):
        raise GraphError(f"Part sizes must be positive: {list(part_sizes)}")
    n = sum(part_sizes)
    _check_order(n)
    full = (1 << n) - 1
    adj = []
    start = 0
    for size in part_sizes:
        block = ((1 << size) - 1) << start
        adj.extend([full & ~block] * size)
        start += size
    return Graph(n, tuple(adj))


def turan_part_sizes(n: int, r: int) -> list[int]:
    """Balanced part sizes of T_{n,r}, larger parts first."""
    if not 1 <= r <= n:
        raise GraphError(f"Turan graph needs 1 <= r <= n, got n={n}, r={r}")
    q, rem = divmod(n, r)
    return [q + 1] * rem + [q] * (r - rem)


def turan(n: int, r: int) -> Graph:
    """The r-partite Turan graph T_{n,r}."""
    return complete_multipartite(turan_part_sizes(n, r))


_MINIMUM_ORDER = {
    "complete": 1,
    "empty": 0,
    "cycle": 3,
    "path": 1,
    "star": 1,
    "matching": 0,
    "wheel": 4,
}


def standard_graph(kind: str, n: int) -> Graph:
    """K_n, E_n, C_n, P_n, S_n (centre 0), M_n (n even) or W_n = K_1 + C_{n-1}."""
    if kind not in _MINIMUM_ORDER:
        raise GraphError(f"Unknown graph kind {kind!r}")
    if n < _MINIMUM_ORDER[kind]:
        raise GraphError(f"{kind} needs at least {_MINIMUM_ORDER[kind]} vertices, got {n}")
    _check_order(n)
    if kind == "complete":
        return complete_multipartite([1] * n)
    if kind == "empty":
        return empty(n)
    if kind == "cycle":
        return with_edges(n, [(i, (i + 1) % n) if i < n - 1 else (0, n - 1) for i in range(n)])
    if kind == "path":
        return with_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "star":
        return with_edges(n, [(0, i) for i in range(1, n)])
    if kind == "matching":
        if n % 2:
            raise GraphError(f"Matching graph needs an even order, got {n}")
        return with_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])
    return join(empty(1), standard_graph("cycle", n - 1))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    _check_order(g.n + h.n)
    return Graph(g.n + h.n, g.adj + tuple(row << g.n for row in h.adj))


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between the two sides."""
    _check_order(g.n + h.n)
    left = (1 << g.n) - 1
    right = ((1 << h.n) - 1) << g.n
    adj = tuple(row | right for row in g.adj) + tuple((row << g.n) | left for row in h.adj)
    return Graph(g.n + h.n, adj)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    """G(n, p) sample drawn from ``rng``."""
    _check_order(n)
    return with_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_permutation(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.permute(perm)


# ── Canonical labelling ─────────────────────────────────────────────


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition.

    Cells are split by the number of neighbours each vertex has in every
    cell; sub-cells keep the position of their parent and are ordered by
    that count vector, so the result is isomorphism invariant.
    """
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            keyed: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                key = tuple((g.adj[v] & m).bit_count() for m in masks)
                keyed.setdefault(key, []).append(v)
            for key in sorted(keyed):
                new_cells.append(keyed[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _twin_representatives(g: Graph, cell: list[int]) -> list[int]:
    """One vertex per class of twins; swapping twins is an automorphism."""
    reps: list[int] = []
    for v in cell:
        if not any((g.adj[v] & ~(1 << u)) == (g.adj[u] & ~(1 << v)) for u in reps):
            reps.append(v)
    return reps


def _encode(g: Graph, order: list[int]) -> tuple[int, ...]:
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new
    return g.permute(perm).adj


@lru_cache(maxsize=1 << 16)
def _canonical_adj(n: int, adj: tuple[int, ...]) -> tuple[int, ...]:
    g = Graph(n, adj)
    if n <= 1:
        return adj
    degree_cells: dict[int, list[int]] = {}
    for v in range(n):
        degree_cells.setdefault(g.degree(v), []).append(v)
    start = _refine(g, [degree_cells[d] for d in sorted(degree_cells)])

    best: Optional[tuple[int, ...]] = None
    stack = [start]
    while stack:
        cells = stack.pop()
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _encode(g, [c[0] for c in cells])
            if best is None or code > best:
                best = code
            continue
        cell = cells[target]
        for v in _twin_representatives(g, cell):
            split = cells[:target] + [[v], [u for u in cell if u != v]] + cells[target + 1:]
            stack.append(_refine(g, split))
    return best


def canonical_form(g: Graph) -> Graph:
    """Relabelling of ``g`` shared by every graph isomorphic to it."""
    return Graph(g.n, _canonical_adj(g.n, g.adj))


def canonical_key(g: Graph) -> str:
    """graph6 text of the canonical form; a hashable isomorphism class id."""
    return to_graph6(canonical_form(g))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.edge_count == h.edge_count and canonical_form(g) == canonical_form(h)


# ── graph6 ──────────────────────────────────────────────────────────


def to_graph6(g: Graph) -> str:
    """Short-form graph6 text (n < 63)."""
    if g.n >= 63:
        raise BudgetError("graph6 output is only emitted for n < 63")
    out = [chr(63 + g.n)]
    value = 0
    width = 0
    for j in range(1, g.n):
        for i in range(j):
            value = (value << 1) | (g.adj[i] >> j & 1)
            width += 1
            if width == 6:
                out.append(chr(63 + value))
                value = width = 0
    if width:
        out.append(chr(63 + (value << (6 - width))))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode graph6 text, short or long form, with optional header.

    Raises:
        ParseError: on a bad header byte, a payload of the wrong length,
            characters outside 63..126, or nonzero padding bits.
    """
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    if not s:
        raise ParseError("Empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= d <= 63 for d in data):
        raise ParseError(f"Character outside graph6 range in {text!r}")

    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) >= 2 and data[1] < 63:
        if len(data) < 4:
            raise ParseError(f"Truncated long-form header in {text!r}")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    else:
        if len(data) < 8:
            raise ParseError(f"Truncated long-form header in {text!r}")
        n = 0
        for d in data[2:8]:
            n = (n << 6) | d
        pos = 8
    if n > MAX_VERTICES:
        raise BudgetError(f"graph6 graph has {n} vertices, above {MAX_VERTICES}")

    nbits = n * (n - 1) // 2
    payload = data[pos:]
    if len(payload) != (nbits + 5) // 6:
        raise ParseError(
            f"graph6 payload has {len(payload)} bytes, expected {(nbits + 5) // 6} for n={n}"
        )
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if payload[k // 6] >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    pad = len(payload) * 6 - nbits
    if pad and payload[-1] & ((1 << pad) - 1):
        raise ParseError(f"Nonzero graph6 padding bits in {text!r}")
    return Graph(n, tuple(adj))
