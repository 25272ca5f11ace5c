"""
Explicit graphs: Turan graphs with small embedded subgraphs, the cone and
matching witnesses, the two-star counterexample, and k-fold packing
families.

Embedded shapes always sit on the lowest-indexed vertices of their part so
every construction is reproducible as a graph6 fixture.
"""

import logging
from collections import Counter
from typing import Literal, Optional, Sequence

from embedding import GraphFamily, packing_family
from errors import DomainError, GraphError
from graph_core import Edge, Graph, complete_multipartite, empty, join, standard_graph, turan, turan_part_sizes
from models import Partition

logger = logging.getLogger(__name__)

Shape = Literal["star", "triangle", "matching", "explicit"]


def shape_edges(shape: Shape, m: int, edges: Optional[Sequence[Edge]] = None) -> list[Edge]:
    """Edges of an embedded shape on local vertices 0, 1, ..."""
    if shape == "star":
        return [(0, i) for i in range(1, m + 1)]
    if shape == "triangle":
        if m != 3:
            raise DomainError(f"A triangle has 3 edges, asked for {m}")
        return [(0, 1), (0, 2), (1, 2)]
    if shape == "matching":
        return [(2 * i, 2 * i + 1) for i in range(m)]
    if shape == "explicit":
        if edges is None or len(edges) != m:
            raise DomainError(f"Explicit shape needs exactly {m} edges")
        return [(min(u, v), max(u, v)) for u, v in edges]
    raise DomainError(f"Unknown shape {shape!r}")


def embed_in_part(
    base: Graph, partition: Partition, part: int, local_edges: Sequence[Edge]
) -> Graph:
    """Add ``local_edges`` (indices within the part) to ``base``."""
    if not 0 <= part < partition.r:
        raise DomainError(f"Part {part} outside 0..{partition.r - 1}")
    members = [v for v, c in enumerate(partition.assignment) if c == part]
    needed = 1 + max((max(e) for e in local_edges), default=-1)
    if needed > len(members):
        raise DomainError(f"Shape needs {needed} vertices, part {part} has {len(members)}")
    return base.add_edges([(members[u], members[v]) for u, v in local_edges])


def turan_plus_edges(
    n: int,
    r: int,
    m: int,
    shape: Shape = "star",
    target_part: int = 0,
    edges: Optional[Sequence[Edge]] = None,
) -> tuple[Graph, Partition]:
    """T_{n,r} with ``m`` edges of the given shape embedded in one part.

    Raises:
        DomainError: if the shape does not fit the part.
    """
    partition = Partition.from_sizes(turan_part_sizes(n, r))
    g = embed_in_part(turan(n, r), partition, target_part, shape_edges(shape, m, edges))
    return g, partition


Layout = dict[int, list[Edge]]


def in_part_layouts(r: int, k: int) -> list[tuple[str, Layout]]:
    """Ways to place k - 1 edges inside the parts of an r-partite frame.

    Stars, matchings and (for k = 4) triangles go into the largest and the
    smallest part; ``spread`` deals matching edges round-robin over all
    parts. Layouts map a part to its local edges.
    """
    m = k - 1
    if m == 0:
        return [("turan", {})]
    shapes: list[Shape] = ["star"] if m == 1 else ["star", "matching"] + (["triangle"] if m == 3 else [])
    layouts = [
        (f"{shape} in part {part}", {part: shape_edges(shape, m)})
        for shape in shapes
        for part in sorted({0, r - 1})
    ]
    if m >= 2 and r >= 2:
        counts = Counter(i % r for i in range(m))
        layouts.append(("spread", {part: shape_edges("matching", c) for part, c in sorted(counts.items())}))
    return layouts


def turan_plus_layout(n: int, r: int, layout: Layout) -> tuple[Graph, Partition]:
    """T_{n,r} with every part's local edges of ``layout`` added.

    Raises:
        DomainError: if a part is too small for its edges.
    """
    partition = Partition.from_sizes(turan_part_sizes(n, r))
    g = turan(n, r)
    for part, edges in layout.items():
        g = embed_in_part(g, partition, part, edges)
    return g, partition


def smallest_part(n: int, r: int) -> int:
    """Index of a part of size floor(n/r); part 0 when all parts are equal."""
    sizes = turan_part_sizes(n, r)
    return 0 if sizes[0] == sizes[-1] else r - 1


def spex_construction(
    n: int, r: int, k: int, shape_override: Optional[Literal["star"]] = None
) -> tuple[Graph, Partition]:
    """T_{n,r} plus k - 1 edges in a smallest part: a triangle for k = 4, else a star.

    ``shape_override="star"`` forces the star for k = 4; that graph is not
    spectrally extremal and exists for comparison only.
    """
    if k < 1:
        raise DomainError(f"spex_construction needs k >= 1, got {k}")
    shape: Shape = "triangle" if k == 4 and shape_override != "star" else "star"
    return turan_plus_edges(n, r, k - 1, shape, smallest_part(n, r))


def turan_plus_matching(n: int, r: int) -> Graph:
    """T'_{n,r}: a maximum matching embedded in a part of size ceil(n/r)."""
    size = turan_part_sizes(n, r)[0]
    g, _ = turan_plus_edges(n, r, size // 2, "matching", 0)
    return g


def cone_over_turan(n: int, r: int) -> Graph:
    """K_1 + T_{n-1,r}."""
    if n < r + 1:
        raise GraphError(f"cone_over_turan needs n >= r + 1, got n={n}, r={r}")
    return join(empty(1), turan(n - 1, r))


def _bipartite_with(s: int, left: Sequence[Edge], right: Sequence[Edge]) -> Graph:
    g = complete_multipartite([2 * s, 2 * s])
    return g.add_edges(list(left) + [(2 * s + u, 2 * s + v) for u, v in right])


def counterexample_family(s: int) -> GraphFamily:
    """{H1, H2, H3} built on K_{2s,2s}.

    H1 adds two disjoint edges to one side, H2 a K_{1,s+2} to one side and
    H3 a K_{1,s} to each side.
    """
    if s < 3:
        raise DomainError(f"counterexample_family needs s >= 3, got {s}")
    h1 = _bipartite_with(s, shape_edges("matching", 2), [])
    h2 = _bipartite_with(s, shape_edges("star", s + 2), [])
    h3 = _bipartite_with(s, shape_edges("star", s), shape_edges("star", s))
    return GraphFamily.from_members(f"counterexample({s})", [h1, h2, h3])


def counterexample_witness(n: int, s: int) -> tuple[Graph, Partition]:
    """T_{n,2} minus the cross edge uv, plus a K_{1,s+1} centred at u and one at v.

    u = 0 and v = n/2; leaves are the next lowest vertices of each part.
    """
    if s < 3:
        raise DomainError(f"counterexample_witness needs s >= 3, got {s}")
    if n % 2 or n < 4 * s + 4:
        raise DomainError(f"counterexample_witness needs even n >= {4 * s + 4}, got {n}")
    half = n // 2
    partition = Partition.from_sizes([half, half])
    g = turan(n, 2).remove_edges([(0, half)])
    star = shape_edges("star", s + 1)
    g = embed_in_part(g, partition, 0, star)
    g = embed_in_part(g, partition, 1, star)
    return g, partition


def gamma_family(k: int, r: int) -> GraphFamily:
    """Gamma_{k,r}: every union of k pairwise edge-disjoint copies of K_r."""
    if k < 1 or r < 2:
        raise DomainError(f"gamma_family needs k >= 1 and r >= 2, got k={k}, r={r}")
    clique = standard_graph("complete", r)
    patterns = [clique] * k
    return GraphFamily.from_members(f"Gamma({k},{r})", packing_family(patterns), packing=patterns)


def named_construction(name: str, **params) -> tuple[Graph, Optional[Partition]]:
    """Dispatch used by the CLI ``construct`` command."""
    builders = {
        "turan": lambda n, r: (turan(n, r), Partition.from_sizes(turan_part_sizes(n, r))),
        "turan-plus-edges": lambda n, r, m, shape="star", part=0: turan_plus_edges(n, r, m, shape, part),
        "spex": lambda n, r, k, shape_override=None: spex_construction(n, r, k, shape_override),
        "turan-plus-matching": lambda n, r: (turan_plus_matching(n, r), Partition.from_sizes(turan_part_sizes(n, r))),
        "cone": lambda n, r: (cone_over_turan(n, r), None),
        "counterexample": lambda n, s: counterexample_witness(n, s),
    }
    if name not in builders:
        raise DomainError(f"Unknown construction {name!r}; choose from {sorted(builders)}")
    try:
        return builders[name](**params)
    except TypeError as e:
        raise DomainError(f"Bad parameters for {name}: {e}") from e
