"""One-vertex extension kernel and its pool entry point.

A child graph adds one vertex to a parent; the new vertex must have minimum
degree in the child, so deleting a minimum-degree vertex from any graph on
j vertices leads back to a parent on j - 1 vertices. Children are kept only
if they are family-free and reach the level's edge threshold.
"""

import asyncio
import itertools
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from embedding import GraphFamily, family_search
from graph_core import Graph, canonical_form, canonical_key, parse_graph6

logger = logging.getLogger(__name__)


@dataclass
class ChunkResult:
    """Children of a batch of parents, keyed by canonical graph6."""
    children: dict[str, Graph] = field(default_factory=dict)
    nodes: int = 0
    exhausted: bool = False


def neighbourhoods(parent: Graph, threshold: int) -> list[int]:
    """Neighbourhood masks for a new minimum-degree vertex reaching ``threshold`` edges."""
    if parent.n == 0:
        return [0] if threshold <= 0 else []
    degrees = parent.degrees()
    low = min(degrees)
    forced = 0
    for v, d in enumerate(degrees):
        if d == low:
            forced |= 1 << v
    masks = []
    smallest = max(0, threshold - parent.edge_count)
    for size in range(smallest, min(low + 1, parent.n) + 1):
        for chosen in itertools.combinations(range(parent.n), size):
            mask = 0
            for w in chosen:
                mask |= 1 << w
            # the new vertex may exceed the old minimum only by covering every minimum vertex
            if size == low + 1 and mask & forced != forced:
                continue
            masks.append(mask)
    return masks


def extend_parents(
    parents: list[Graph],
    fam: GraphFamily,
    threshold: int,
    budget: Optional[int] = None,
    stop_event=None,
) -> ChunkResult:
    """Every family-free child with at least ``threshold`` edges, up to isomorphism."""
    result = ChunkResult()
    rejected: set[str] = set()
    for parent in parents:
        if stop_event is not None and stop_event.is_set():
            result.exhausted = True
            break
        for mask in neighbourhoods(parent, threshold):
            child = parent.add_vertex(mask)
            key = canonical_key(child)
            result.nodes += 1
            if key in result.children or key in rejected:
                continue
            if mask:
                remaining = None if budget is None else max(budget - result.nodes, 0)
                outcome = family_search(child, fam, anchor=child.n - 1, budget=remaining)
                result.nodes += outcome.nodes
                if outcome.status == "exhausted":
                    result.exhausted = True
                    if stop_event is not None:
                        stop_event.set()
                    return result
                if outcome.found:
                    rejected.add(key)
                    continue
            result.children[key] = canonical_form(child)
        if budget is not None and result.nodes > budget:
            result.exhausted = True
            if stop_event is not None:
                stop_event.set()
            break
    return result


async def extend_chunk(
    chunk_id: int,
    parents_g6: list[str],
    fam: GraphFamily,
    threshold: int,
    budget: Optional[int],
    stop_event,
    run_id: str = "",
) -> tuple[list[str], int, bool]:
    """Pool entry point: extend a chunk of parents given as graph6.

    The stop event is polled between parents; a chunk that runs out of
    budget sets it so sibling chunks stop early.
    """
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s [%(process)d] %(name)s - %(message)s",
        force=True,
    )
    tag = f"chunk-{chunk_id}"
    rid = run_id[:8]
    log = logging.getLogger(tag)
    log.debug(f"[{rid}] Started (pid={os.getpid()}) with {len(parents_g6)} parents")

    result = ChunkResult()
    for text in parents_g6:
        stopped = await asyncio.to_thread(stop_event.is_set)
        if stopped:
            result.exhausted = True
            break
        remaining = None if budget is None else max(budget - result.nodes, 0)
        part = extend_parents([parse_graph6(text)], fam, threshold, remaining, stop_event)
        result.nodes += part.nodes
        for key, child in part.children.items():
            result.children.setdefault(key, child)
        if part.exhausted:
            result.exhausted = True
            break

    log.debug(f"[{rid}] Done: {len(result.children)} children, {result.nodes} nodes")
    return sorted(result.children), result.nodes, result.exhausted
