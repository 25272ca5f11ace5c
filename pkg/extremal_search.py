"""
Exact ex(n, H) and EX(n, H) at desk scale, plus the edit distance to T_{n,r}.

Two independent methods:

- ``ex_oracle`` walks every labelled graph on n <= 7 vertices edge by edge,
  cutting branches that are no longer free or can no longer reach the best
  edge count.
- ``ex_search`` generates, level by level and up to isomorphism, every free
  graph that can still reach a proven lower bound (see
  ``free_graphs_at_least``). Levels can fan out over the process pool and be
  persisted for resumption.
"""

from __future__ import annotations

import asyncio
import itertools
import logging
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional

import run_store
from embedding import GraphFamily, family_search, is_family_free
from errors import BudgetError, DomainError, GraphError
from graph_core import (
    Graph,
    bits,
    canonical_form,
    canonical_key,
    empty,
    parse_graph6,
    to_graph6,
    turan,
    turan_part_sizes,
)
from invariants import turan_edge_count
from models import EditDistance, ExtremalReport, Partition
from pool_manager import close_pool, get_manager, get_pool, resolve_threads
from worker import ChunkResult, extend_chunk, extend_parents

logger = logging.getLogger(__name__)

ORACLE_MAX_VERTICES = 7
SEARCH_MAX_VERTICES = 10
EDIT_PARTITION_BUDGET = 500_000
# levels smaller than this are extended inline even when threads > 1
PARALLEL_MIN_PARENTS = 64
CHUNKS_PER_PROCESS = 4


@dataclass
class FreeGraphs:
    """All free graphs on n vertices with at least ``threshold`` edges."""
    n: int
    threshold: int
    graphs: list[Graph] = field(default_factory=list)
    nodes: int = 0
    complete: bool = True
    frontier_hash: Optional[str] = None
    thresholds: list[int] = field(default_factory=list)


def threshold_chain(n: int, target: int) -> list[int]:
    """Edge thresholds per level so that min-degree deletion never drops below them.

    A graph on j vertices with e edges has a vertex of degree at most
    floor(2e/j), and e - floor(2e/j) is nondecreasing in e.
    """
    chain = [0] * (n + 1)
    chain[n] = max(0, target)
    for j in range(n, 0, -1):
        chain[j - 1] = max(0, chain[j] - (2 * chain[j]) // j)
    return chain


# ── Generation ──────────────────────────────────────────────────────


async def _extend_parallel(
    level: list[Graph],
    fam: GraphFamily,
    threshold: int,
    threads: int,
    budget: Optional[int],
    run_id: str,
) -> ChunkResult:
    stop_event = get_manager().Event()
    n_chunks = min(len(level), threads * CHUNKS_PER_PROCESS)
    chunks = [[to_graph6(g) for g in level[i::n_chunks]] for i in range(n_chunks)]
    pool = get_pool(threads)
    try:
        outputs = await asyncio.gather(
            *[
                pool.apply(extend_chunk, (i, chunk, fam, threshold, budget, stop_event, run_id))
                for i, chunk in enumerate(chunks)
            ]
        )
    finally:
        await close_pool()
    merged = ChunkResult()
    for keys, nodes, exhausted in outputs:
        merged.nodes += nodes
        merged.exhausted = merged.exhausted or exhausted
        for key in keys:
            if key not in merged.children:
                merged.children[key] = parse_graph6(key)
    return merged


def _extend_level(
    level: list[Graph],
    fam: GraphFamily,
    threshold: int,
    threads: int,
    budget: Optional[int],
    run_id: str,
) -> ChunkResult:
    if threads <= 1 or len(level) < PARALLEL_MIN_PARENTS:
        return extend_parents(level, fam, threshold, budget)
    return asyncio.run(_extend_parallel(level, fam, threshold, threads, budget, run_id))


def free_graphs_at_least(
    n: int,
    fam: GraphFamily,
    threshold: int,
    threads: Optional[int] = 1,
    budget: Optional[int] = None,
    store: bool = False,
    run_id: str = "",
) -> FreeGraphs:
    """Every family-free graph on ``n`` vertices with at least ``threshold`` edges.

    Level j holds the free graphs on j vertices with at least t_j edges, up
    to isomorphism; each level extends the previous one by a minimum-degree
    vertex. With ``store`` set, every finished level is saved and a rerun
    with the same arguments resumes from the deepest saved level.
    """
    if n > SEARCH_MAX_VERTICES:
        raise BudgetError(f"Generation supports n <= {SEARCH_MAX_VERTICES}, got {n}")
    threads = resolve_threads(threads)
    chain = threshold_chain(n, threshold)
    out = FreeGraphs(n=n, threshold=threshold, thresholds=chain)

    level = [empty(0)]
    start = 1
    if store:
        run_store.init_db()
        saved = run_store.load_level(fam.content_key, n, threshold, run_id)
        if saved is not None:
            level = [parse_graph6(s) for s in saved.graphs]
            start = saved.level + 1
            out.nodes = saved.nodes
            out.frontier_hash = saved.frontier_hash
            logger.info(
                f"Resuming {fam.name} n={n} from level {saved.level} "
                f"({len(level)} graphs, {saved.nodes} nodes, {saved.frontier_hash})"
            )

    for j in range(start, n + 1):
        remaining = None if budget is None else max(budget - out.nodes, 0)
        result = _extend_level(level, fam, chain[j], threads, remaining, run_id)
        out.nodes += result.nodes
        if result.exhausted or (budget is not None and out.nodes > budget):
            logger.warning(f"Budget exhausted at level {j} for {fam.name} n={n} after {out.nodes} nodes")
            out.complete = False
            out.graphs = []
            return out
        keys = sorted(result.children)
        level = [result.children[k] for k in keys]
        out.frontier_hash = run_store.frontier_hash(keys)
        if store:
            run_store.save_level(fam.content_key, n, threshold, j, chain[j], keys, out.nodes, run_id)
        logger.info(f"Level {j}: {len(level)} free graphs with >= {chain[j]} edges")
        if not level:
            break

    out.graphs = level if level and level[0].n == n else []
    return out


# ── Lower bounds ────────────────────────────────────────────────────


def _best_extension(g: Graph, fam: GraphFamily, floor: int) -> Optional[Graph]:
    """Free one-vertex extension of ``g`` with the most edges, if it beats ``floor``."""
    n = g.n
    for size in range(n, -1, -1):
        if g.edge_count + size <= floor:
            return None
        for chosen in itertools.combinations(range(n), size):
            mask = 0
            for w in chosen:
                mask |= 1 << w
            child = g.add_vertex(mask)
            if not mask or not family_search(child, fam, anchor=n).found:
                return child
    return None


def _lower_bound(n: int, fam: GraphFamily, previous: list[Graph]) -> tuple[int, list[Graph]]:
    """A free graph on n vertices with as many edges as cheaply provable."""
    r = min(max(fam.chi_family - 1, 1), n)
    best = turan(n, r)
    for g in previous:
        child = _best_extension(g, fam, best.edge_count)
        if child is not None and child.edge_count > best.edge_count:
            best = child
    return best.edge_count, [best]


# ── ex(n, H) ────────────────────────────────────────────────────────


def _report(
    n: int,
    fam: GraphFamily,
    found: FreeGraphs,
    lower: int,
    witnesses: list[Graph],
    started: float,
) -> ExtremalReport:
    if found.complete:
        value = max(g.edge_count for g in found.graphs)
        extremal = [g for g in found.graphs if g.edge_count == value]
    else:
        value = lower
        extremal = [canonical_form(g) for g in witnesses]
    for g in extremal:
        if g.edge_count != value or not is_family_free(g, fam):
            raise AssertionError(f"Extremal graph {to_graph6(g)} failed re-verification")
    return ExtremalReport(
        n=n,
        family=fam.name,
        value=value,
        extremal=sorted(canonical_key(g) for g in extremal),
        method="pruned",
        complete=found.complete,
        threshold=found.threshold,
        frontier_hash=found.frontier_hash,
        nodes_explored=found.nodes,
        elapsed=time.perf_counter() - started,
    )


def ex_sequence(
    n_max: int,
    fam: GraphFamily,
    threads: Optional[int] = 1,
    budget: Optional[int] = None,
    store: bool = False,
    run_id: str = "",
) -> list[ExtremalReport]:
    """ex(j, H) and EX(j, H) for j = 1..n_max, each seeded by the one before."""
    if n_max > SEARCH_MAX_VERTICES:
        raise BudgetError(f"ex_search supports n <= {SEARCH_MAX_VERTICES}, got {n_max}")
    if n_max < 1:
        raise GraphError(f"ex_search needs n >= 1, got {n_max}")
    reports: list[ExtremalReport] = []
    previous: list[Graph] = []
    for j in range(1, n_max + 1):
        started = time.perf_counter()
        lower, witnesses = _lower_bound(j, fam, previous)
        logger.info(f"ex({j}, {fam.name}): lower bound {lower}")
        found = free_graphs_at_least(j, fam, lower, threads=threads, budget=budget, store=store, run_id=run_id)
        report = _report(j, fam, found, lower, witnesses, started)
        if reports and report.complete and reports[-1].complete and report.value < reports[-1].value:
            raise AssertionError(f"ex is not monotone at n={j} for {fam.name}")
        reports.append(report)
        previous = [parse_graph6(s) for s in report.extremal]
    return reports


def ex_search(
    n: int,
    fam: GraphFamily,
    threads: Optional[int] = 1,
    budget: Optional[int] = None,
    store: bool = False,
    run_id: str = "",
) -> ExtremalReport:
    """Exact ex(n, H) and EX(n, H) for n <= 10.

    When the node budget runs out the report carries the best proven lower
    bound with ``complete=False``.

    Raises:
        BudgetError: if n exceeds 10.
    """
    return ex_sequence(n, fam, threads=threads, budget=budget, store=store, run_id=run_id)[-1]


def ex_oracle(n: int, fam: GraphFamily) -> ExtremalReport:
    """Exhaustive labelled scan for n <= 7.

    Raises:
        BudgetError: if n exceeds 7.
    """
    if n > ORACLE_MAX_VERTICES:
        raise BudgetError(f"ex_oracle supports n <= {ORACLE_MAX_VERTICES}, got {n}")
    if n < 1:
        raise GraphError(f"ex_oracle needs n >= 1, got {n}")
    started = time.perf_counter()
    pairs = [(u, v) for v in range(n) for u in range(v)]
    adj = [0] * n
    best = -1
    winners: dict[str, Graph] = {}
    nodes = 0

    def visit(i: int, count: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if count + len(pairs) - i < best:
            return
        if i == len(pairs):
            if count > best:
                best = count
                winners.clear()
            g = Graph(n, tuple(adj))
            winners.setdefault(canonical_key(g), canonical_form(g))
            return
        u, v = pairs[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        if not family_search(Graph(n, tuple(adj)), fam, anchor=u).found:
            visit(i + 1, count + 1)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        visit(i + 1, count)

    visit(0, 0)
    logger.info(f"ex_oracle({n}, {fam.name}) = {best} with {len(winners)} extremal graphs, {nodes} nodes")
    return ExtremalReport(
        n=n,
        family=fam.name,
        value=best,
        extremal=sorted(winners),
        method="exhaustive",
        nodes_explored=nodes,
        elapsed=time.perf_counter() - started,
    )


# ── Distance to the Turan graph ─────────────────────────────────────


def _balanced_partition_count(sizes: list[int]) -> int:
    count = factorial(sum(sizes))
    for s in sizes:
        count //= factorial(s)
    for s in set(sizes):
        count //= factorial(sizes.count(s))
    return count


def turan_edit_distance(g: Graph, r: int) -> EditDistance:
    """Fewest edits turning ``g`` into T_{n,r} over balanced r-partitions.

    alpha1 counts edges inside parts and alpha2 missing cross pairs; their
    difference does not depend on the partition, so minimizing alpha1
    minimizes the sum and breaks ties toward smaller alpha1.

    Raises:
        DomainError: if r < 2.
        BudgetError: if there are too many balanced partitions to scan.
    """
    if r < 2:
        raise DomainError(f"turan_edit_distance needs r >= 2, got {r}")
    n = g.n
    sizes = turan_part_sizes(n, r)
    total = _balanced_partition_count(sizes)
    if total > EDIT_PARTITION_BUDGET:
        raise BudgetError(f"{total} balanced {r}-partitions of {n} vertices exceed the scan budget")

    best_inside = None
    best_parts: list[int] = []
    parts = [0] * r

    def inside(mask: int) -> int:
        return sum((g.adj[v] & mask).bit_count() for v in bits(mask)) // 2

    def place(i: int, remaining: int, edges_inside: int) -> None:
        nonlocal best_inside, best_parts
        if best_inside is not None and edges_inside >= best_inside:
            return
        if i == r:
            best_inside = edges_inside
            best_parts = list(parts)
            return
        for chosen in itertools.combinations(list(bits(remaining)), sizes[i]):
            mask = 0
            for v in chosen:
                mask |= 1 << v
            # parts of equal size are ordered by their smallest vertex
            if i > 0 and sizes[i] == sizes[i - 1] and chosen and (mask & -mask) < (parts[i - 1] & -parts[i - 1]):
                continue
            parts[i] = mask
            place(i + 1, remaining & ~mask, edges_inside + inside(mask))

    place(0, g.full_mask, 0)
    alpha1 = best_inside
    alpha2 = turan_edge_count(n, r) - (g.edge_count - alpha1)
    assignment = [0] * n
    for c, mask in enumerate(best_parts):
        for v in bits(mask):
            assignment[v] = c
    return EditDistance(alpha1=alpha1, alpha2=alpha2, partition=Partition(assignment=assignment, sizes=sizes))


def turan_matching_bound(n: int, r: int) -> int:
    """e(T_{n,r}) + floor(n / 2r): the threshold in the matching/star criterion."""
    return turan_edge_count(n, r) + n // (2 * r)


def edit_distance_consistent(g: Graph, dist: EditDistance) -> bool:
    """Recount alpha1 and alpha2 against the stored partition."""
    masks = dist.partition.masks()
    alpha1 = sum(
        1 for u, v in g.edges() if any(m >> u & 1 and m >> v & 1 for m in masks)
    )
    cross = comb(g.n, 2) - sum(comb(s, 2) for s in dist.partition.sizes)
    alpha2 = cross - (g.edge_count - alpha1)
    return (alpha1, alpha2) == (dist.alpha1, dist.alpha2)
