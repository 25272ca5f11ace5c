"""
Spectral radius, Perron vectors, spex(n, H), and numeric checks of the
eigenvector inequalities used for Turan-type extremal graphs.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from typing import Optional

import numpy as np

from constructions import spex_construction, turan_plus_edges
from embedding import GraphFamily
from errors import BudgetError, DomainError, GraphError, SpectralError
from extremal_search import ex_search, free_graphs_at_least
from graph_core import Graph, bits, canonical_key, complete_multipartite, parse_graph6, turan, turan_part_sizes
from invariants import max_degree
from models import Partition, SpectralReport, SpexReport

logger = logging.getLogger(__name__)

TOL = 1e-12
TIE_TOL = 1e-9
MAX_ITERATIONS = 200_000
SPEX_MAX_VERTICES = 9
GAP_MAX_VERTICES = 20
CONSTRUCTION_MAX_VERTICES = 30
# relative slack for comparing computed quantities against closed-form bounds
BOUND_SLACK = 1e-9


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


def _power_iteration(a: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, float, int]:
    """Dominant eigenpair of a connected block via power iteration on A + I."""
    m = a.shape[0]
    x = np.ones(m) / math.sqrt(m)
    for it in range(1, max_iter + 1):
        y = a @ x
        rho = float(x @ y)
        residual = float(np.max(np.abs(y - rho * x)))
        if residual <= tol:
            return rho, x, residual, it
        x = y + x
        x /= np.linalg.norm(x)
    raise SpectralError(f"Power iteration reached {max_iter} steps with residual {residual:.3e} > {tol:.1e}")


def spectral_radius(g: Graph, tol: float = TOL, max_iter: int = MAX_ITERATIONS) -> SpectralReport:
    """rho(g) with a Perron vector whose residual |Ax - rho x|_inf is at most ``tol``.

    Disconnected graphs are handled per component; the vector of the first
    component attaining the maximum is reported, zero elsewhere.

    Raises:
        GraphError: on the graph with no vertices.
        SpectralError: if the iteration cap is reached first.
    """
    if g.n == 0:
        raise GraphError("Spectral radius of the empty vertex set is undefined")
    if tol <= 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")
    best: Optional[tuple[float, np.ndarray, float, int, list[int]]] = None
    for mask in g.components():
        vertices = list(bits(mask))
        block = adjacency_matrix(g.induced(vertices))
        rho, x, residual, iterations = _power_iteration(block, tol, max_iter)
        if best is None or rho > best[0] + tol:
            best = (rho, x, residual, iterations, vertices)
    rho, x, residual, iterations, vertices = best
    perron = np.zeros(g.n)
    perron[vertices] = x
    return SpectralReport(rho=rho, perron=perron.tolist(), residual=residual, iterations=iterations)


def perron_vector(g: Graph, tol: float = TOL) -> np.ndarray:
    return np.asarray(spectral_radius(g, tol).perron)


def rayleigh_lower_bound(g: Graph) -> float:
    """2e/n: the all-ones Rayleigh quotient, a lower bound on rho."""
    return 2 * g.edge_count / g.n if g.n else 0.0


def stanley_upper_bound(edge_count: int) -> float:
    """rho <= (sqrt(1 + 8e) - 1) / 2 for any graph with e edges."""
    return (math.sqrt(1 + 8 * edge_count) - 1) / 2


# ── spex(n, H) ──────────────────────────────────────────────────────


def spex_search(
    n: int,
    fam: GraphFamily,
    tol: float = TOL,
    tie_tol: float = TIE_TOL,
    threads: Optional[int] = 1,
    budget: Optional[int] = None,
    store: bool = False,
    run_id: str = "",
) -> SpexReport:
    """spex(n, H) and every free graph within ``tie_tol`` of it, for n <= 9.

    The incumbent is the best extremal graph for ex(n, H). A graph can only
    beat it with rho(rho + 1)/2 edges or more, so only free graphs above that
    edge count are generated; they are scored in decreasing edge order until
    the edge bound falls below the incumbent.

    Raises:
        BudgetError: if n exceeds 9.
    """
    if n > SPEX_MAX_VERTICES:
        raise BudgetError(f"spex_search supports n <= {SPEX_MAX_VERTICES}, got {n}")
    started = time.perf_counter()
    ex_report = ex_search(n, fam, threads=threads, budget=budget, store=store, run_id=run_id)
    best = max(spectral_radius(parse_graph6(s), tol).rho for s in ex_report.extremal)
    edge_floor = math.ceil((best * best + best) / 2 - 1e-6)
    logger.info(f"spex({n}, {fam.name}): incumbent {best:.12f}, candidates need >= {edge_floor} edges")

    found = free_graphs_at_least(n, fam, edge_floor, threads=threads, budget=budget, store=store, run_id=run_id)
    candidates = found.graphs if found.complete else [parse_graph6(s) for s in ex_report.extremal]
    candidates = sorted(candidates, key=lambda g: (-g.edge_count, canonical_key(g)))

    scored: list[tuple[float, str]] = []
    for g in candidates:
        if stanley_upper_bound(g.edge_count) < best - tie_tol:
            break
        if max_degree(g) < best - tie_tol:
            continue
        rho = spectral_radius(g, tol).rho
        scored.append((rho, canonical_key(g)))
        best = max(best, rho)

    spex_set = sorted(key for rho, key in scored if rho >= best - tie_tol)
    within_ex = set(spex_set) <= set(ex_report.extremal)
    if not within_ex:
        logger.warning(f"SPEX({n}, {fam.name}) is not contained in EX")
    return SpexReport(
        n=n,
        family=fam.name,
        rho_star=best,
        spex_set=spex_set,
        ties_flagged=len(spex_set) > 1,
        ex_value=ex_report.value,
        within_ex=within_ex,
        method="pruned",
        complete=found.complete and ex_report.complete,
        candidates=len(scored),
        elapsed=time.perf_counter() - started,
    )


# ── Eigenvector identities and inequalities ─────────────────────────


def eigen_identity_residual(g: Graph, g_prime: Graph, tol: float = TOL) -> float:
    """|x.y (rho' - rho) - x^T (A' - A) y| for the Perron vectors x of g and y of g'.

    Both sides agree exactly for symmetric A, so the value measures numerical
    error only.
    """
    if g.n != g_prime.n:
        raise GraphError(f"Graphs must share a vertex set, got {g.n} and {g_prime.n} vertices")
    if not (g.is_connected() and g_prime.is_connected()):
        raise DomainError("eigen_identity_residual needs connected graphs")
    first = spectral_radius(g, tol)
    second = spectral_radius(g_prime, tol)
    x = np.asarray(first.perron)
    y = np.asarray(second.perron)
    lhs = float(x @ y) * (second.rho - first.rho)
    rhs = float(x @ (adjacency_matrix(g_prime) - adjacency_matrix(g)) @ y)
    return abs(lhs - rhs)


def swap_pairs(n: int, r: int) -> list[tuple[str, Graph, Graph]]:
    """Pairs differing by moving or reshaping a small embedded subgraph.

    Star against triangle in the same part, and each shape moved from a
    largest part to a smallest one when the parts differ in size.
    """
    sizes = turan_part_sizes(n, r)
    pairs = []
    if sizes[0] >= 4:
        star, _ = turan_plus_edges(n, r, 3, "star", 0)
        triangle, _ = turan_plus_edges(n, r, 3, "triangle", 0)
        pairs.append((f"star-vs-triangle({n},{r})", star, triangle))
    if sizes[0] != sizes[-1]:
        for shape, m in (("star", 2), ("triangle", 3)):
            if sizes[-1] >= 3:
                big, _ = turan_plus_edges(n, r, m, shape, 0)
                small, _ = turan_plus_edges(n, r, m, shape, r - 1)
                pairs.append((f"{shape}-moved({n},{r})", big, small))
    return pairs


def compositions(n: int, r: int) -> list[list[int]]:
    """Nonincreasing r-part splits of n with positive parts."""
    out = []

    def grow(prefix: list[int], left: int, slots: int, cap: int) -> None:
        if slots == 0:
            if left == 0:
                out.append(list(prefix))
            return
        for size in range(min(cap, left - (slots - 1)), 0, -1):
            if size * slots < left:
                break
            prefix.append(size)
            grow(prefix, left - size, slots - 1, size)
            prefix.pop()

    grow([], n, r, n)
    return out


def multipartite_gap_check(n: int, r: int, tol: float = TOL) -> list[tuple[list[int], float]]:
    """rho(T_{n,r}) - rho(K_{n_1..n_r}) for every split with n_1 - n_r >= 2.

    Raises:
        BudgetError: if n exceeds 20.
    """
    if n > GAP_MAX_VERTICES:
        raise BudgetError(f"multipartite_gap_check supports n <= {GAP_MAX_VERTICES}, got {n}")
    if not 1 <= r <= n:
        raise GraphError(f"multipartite_gap_check needs 1 <= r <= n, got n={n}, r={r}")
    reference = spectral_radius(turan(n, r), tol).rho
    gaps = []
    for sizes in compositions(n, r):
        if sizes[0] - sizes[-1] < 2:
            continue
        gaps.append((sizes, reference - spectral_radius(complete_multipartite(sizes), tol).rho))
    return gaps


def empirical_gamma(n: int, gaps: list[tuple[list[int], float]]) -> Optional[float]:
    """min gap * n over the reported splits."""
    if not gaps:
        return None
    return n * min(gap for _, gap in gaps)


def construction_gap_check(n: int, r: int, alpha1: int, tol: float = TOL) -> bool:
    """rho(G*) - rho(T_{n,r}) >= 2 alpha1/n - 6 alpha1/n^2 for a star of alpha1 edges in a largest part.

    Raises:
        BudgetError: if n exceeds 30.
        DomainError: if the star does not fit the part.
    """
    if n > CONSTRUCTION_MAX_VERTICES:
        raise BudgetError(f"construction_gap_check supports n <= {CONSTRUCTION_MAX_VERTICES}, got {n}")
    if alpha1 == 0:
        return True
    gstar, _ = turan_plus_edges(n, r, alpha1, "star", 0)
    gap = spectral_radius(gstar, tol).rho - spectral_radius(turan(n, r), tol).rho
    bound = 2 * alpha1 / n - 6 * alpha1 / n**2
    return gap >= bound - BOUND_SLACK


def part_sums(gstar: Graph, partition: Partition, tol: float = TOL) -> tuple[float, np.ndarray, float]:
    """(rho, x_{V-V_i} per part, x_V) for the Perron vector of ``gstar``."""
    report = spectral_radius(gstar, tol)
    x = np.asarray(report.perron)
    total = float(x.sum())
    outside = np.array([total - float(x[list(bits(m))].sum()) for m in partition.masks()])
    return report.rho, outside, total


def _check_partition(gstar: Graph, partition: Partition) -> None:
    if len(partition.assignment) != gstar.n:
        raise GraphError(f"Partition covers {len(partition.assignment)} vertices, graph has {gstar.n}")
    masks = partition.masks()
    for u, v in itertools.combinations(range(gstar.n), 2):
        same = partition.assignment[u] == partition.assignment[v]
        if not same and not gstar.has_edge(u, v):
            raise GraphError(f"Cross pair ({u}, {v}) is missing: partition does not fit the graph")
    if any(m == 0 for m in masks):
        raise GraphError("Partition has an empty class")


def embedded_edge_counts(gstar: Graph, partition: Partition) -> list[int]:
    """e(H_i): edges of ``gstar`` inside each class."""
    return [sum((gstar.adj[v] & m).bit_count() for v in bits(m)) // 2 for m in partition.masks()]


def perron_part_sum_bounds(gstar: Graph, partition: Partition, k: int, tol: float = TOL) -> bool:
    """Both bounds on x_{V-V_i} for T_{n,r} plus k - 1 in-part edges.

        rho x_V / (rho + |V_i| + 2e(H_i)/(rho - k + 1))
            <= x_{V-V_i} <=
        rho x_V / (rho + |V_i| + 2e(H_i)/rho)

    Raises:
        GraphError: if the partition is not a complete multipartite frame of ``gstar``.
    """
    _check_partition(gstar, partition)
    rho, outside, total = part_sums(gstar, partition, tol)
    if rho <= k - 1:
        raise DomainError(f"rho = {rho:.6f} must exceed k - 1 = {k - 1}")
    inside = embedded_edge_counts(gstar, partition)
    ok = True
    for i, size in enumerate(partition.sizes):
        lower = rho * total / (rho + size + 2 * inside[i] / (rho - k + 1))
        upper = rho * total / (rho + size + 2 * inside[i] / rho)
        slack = BOUND_SLACK * rho * total
        if not lower - slack <= outside[i] <= upper + slack:
            logger.debug(f"Part {i}: {lower:.12f} <= {outside[i]:.12f} <= {upper:.12f} fails")
            ok = False
    return ok


def perron_part_order(gstar: Graph, partition: Partition, tol: float = TOL) -> bool:
    """Among equal-size classes, fewer inside edges means a larger outside sum."""
    rho, outside, _ = part_sums(gstar, partition, tol)
    inside = embedded_edge_counts(gstar, partition)
    for i, j in itertools.permutations(range(partition.r), 2):
        if partition.sizes[i] == partition.sizes[j] and inside[i] < inside[j]:
            if not outside[i] > outside[j]:
                return False
    return True


def star_vs_triangle_gap(n: int, r: int, tol: float = TOL) -> float:
    """rho(triangle construction) - rho(star construction) at k = 4."""
    triangle, _ = spex_construction(n, r, 4)
    star, _ = spex_construction(n, r, 4, shape_override="star")
    return spectral_radius(triangle, tol).rho - spectral_radius(star, tol).rho
