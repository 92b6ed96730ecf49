"""Classical vertex-cover baselines: Gavril's matching 2-approximation and an
exact branch-and-bound solver used to score approximate covers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import CapacityError
from .graph import Graph
from .problem import vc_validate

__all__ = [
    "CoverResult",
    "cover_result",
    "gavril_2approx",
    "exact_min_vertex_cover",
    "approximation_quality",
    "MAX_EXACT_VERTICES",
]

MAX_EXACT_VERTICES = 24


@dataclass(frozen=True)
class CoverResult:
    cover: frozenset
    size: int
    is_valid: bool

    @property
    def bitstring(self) -> int:
        return sum(1 << v for v in self.cover)


def cover_result(graph: Graph, cover) -> CoverResult:
    cover = frozenset(int(v) for v in cover)
    x = sum(1 << v for v in cover)
    return CoverResult(cover, len(cover), vc_validate(graph, x))


def gavril_2approx(graph: Graph, order_seed=None) -> CoverResult:
    """Both endpoints of a maximal matching built by a random edge scan.

    The scan order is a permutation of the sorted edge list drawn from
    ``numpy.random.default_rng(order_seed)``.
    """
    edges = graph.sorted_edges()
    order = np.random.default_rng(order_seed).permutation(len(edges))
    matched = set()
    for i in order:
        u, v = edges[i]
        if u not in matched and v not in matched:
            matched.update((u, v))
    return cover_result(graph, matched)


def _matching_bound(adj, alive):
    """Size of a greedy maximal matching among ``alive`` vertices."""
    bound = 0
    free = alive
    while free:
        v = (free & -free).bit_length() - 1
        free &= ~(1 << v)
        nbrs = adj[v] & free
        if nbrs:
            u = (nbrs & -nbrs).bit_length() - 1
            free &= ~(1 << u)
            bound += 1
    return bound


def exact_min_vertex_cover(graph: Graph, max_vertices: int = MAX_EXACT_VERTICES) -> CoverResult:
    """A minimum vertex cover by branch and bound.

    Branches on a maximum-degree vertex ``v``: either ``v`` joins the cover,
    or all of its neighbours do. Subtrees are pruned when the partial cover
    plus a maximal-matching lower bound cannot beat the incumbent. Ties are
    broken by lowest vertex index, so the result is deterministic.
    """
    n = graph.n_vertices
    if n > max_vertices:
        raise CapacityError(f"exact solver is limited to {max_vertices} vertices, got {n}")
    adj = graph.neighbour_masks()
    best = [(1 << n) - 1, n]

    def search(alive, chosen, size):
        pick, pick_deg = -1, 0
        rest = alive
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            deg = (adj[v] & alive).bit_count()
            if deg > pick_deg:
                pick, pick_deg = v, deg
        if pick_deg == 0:
            if size < best[1]:
                best[0], best[1] = chosen, size
            return
        if size + _matching_bound(adj, alive) >= best[1]:
            return
        v = pick
        search(alive & ~(1 << v), chosen | (1 << v), size + 1)
        nbrs = adj[v] & alive
        search(alive & ~nbrs & ~(1 << v), chosen | nbrs, size + nbrs.bit_count())

    search((1 << n) - 1, 0, 0)
    return cover_result(graph, [v for v in range(n) if best[0] >> v & 1])


def approximation_quality(optimal_size: int, approx_size: int) -> float:
    """``optimal_size / approx_size``; 1.0 for the edgeless case ``(0, 0)``."""
    if optimal_size < 0:
        raise ValueError("optimal_size must be non-negative")
    if approx_size < optimal_size:
        raise ValueError(f"approximate cover ({approx_size}) smaller than the optimum ({optimal_size})")
    if approx_size == 0:
        return 1.0
    return optimal_size / approx_size
