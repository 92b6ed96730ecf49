"""Undirected simple graphs, the benchmark graph families and edge-list I/O.

Vertex ``i`` of a graph corresponds to bit ``i`` (least significant first) of
a solution bitstring throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EdgeListError

__all__ = [
    "Graph",
    "gen_erdos_renyi",
    "gen_cycle",
    "gen_star",
    "gen_johnson",
    "johnson_subsets",
    "read_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices ``0 .. n_vertices - 1``.

    Edges are stored as a frozenset of ``(u, v)`` pairs with ``u < v``. Pairs
    passed in either orientation are normalised; self-loops and out-of-range
    endpoints raise ``ValueError``.
    """

    n_vertices: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = int(self.n_vertices)
        if n < 1:
            raise ValueError(f"n_vertices must be positive, got {self.n_vertices}")
        normalised = set()
        for edge in self.edges:
            u, v = (int(t) for t in edge)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            normalised.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", frozenset(normalised))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int8)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def neighbour_masks(self) -> list[int]:
        """Bitmask of the neighbours of each vertex."""
        masks = [0] * self.n_vertices
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        e = np.array(self.sorted_edges(), dtype=np.int64).reshape(-1, 2)
        return e[:, 0], e[:, 1]


def gen_erdos_renyi(n: int, prob: float, seed: int) -> Graph:
    """Sample G(n, prob).

    Edge ``(u, v)`` with lexicographic index ``i`` among the C(n, 2) pairs is
    present iff the ``i``-th output of a Philox stream keyed by ``seed`` is
    below ``prob``, so membership depends only on ``(seed, i)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= prob <= 1.0:
        raise ValueError(f"prob must lie in [0, 1], got {prob}")
    pairs = list(itertools.combinations(range(n), 2))
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    draws = rng.random(len(pairs))
    return Graph(n, frozenset(p for p, u in zip(pairs, draws) if u < prob))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs n >= 3 vertices, got {n}")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def gen_star(n: int) -> Graph:
    """Star on ``n`` vertices with vertex 0 as the centre."""
    if n < 2:
        raise ValueError(f"a star needs n >= 2 vertices, got {n}")
    return Graph(n, frozenset((0, i) for i in range(1, n)))


def johnson_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """The k-subsets of ``{0, ..., n-1}`` in colexicographic order.

    Colex order sorts subsets by their largest element first, then the next
    largest, and so on; position in this list is the vertex label used by
    :func:`gen_johnson`.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return sorted(itertools.combinations(range(n), k), key=lambda s: s[::-1])


def gen_johnson(n: int, k: int) -> Graph:
    """Johnson graph J(n, k): k-subsets adjacent when they share k - 1 elements."""
    subsets = [frozenset(s) for s in johnson_subsets(n, k)]
    edges = frozenset(
        (i, j)
        for i, j in itertools.combinations(range(len(subsets)), 2)
        if len(subsets[i] & subsets[j]) == k - 1
    )
    return Graph(len(subsets), edges)


def write_edge_list(graph: Graph) -> str:
    lines = [str(graph.n_vertices)]
    lines.extend(f"{u} {v}" for u, v in graph.sorted_edges())
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    """Parse the edge-list format written by :func:`write_edge_list`.

    Blank lines are ignored. Any other problem raises :class:`EdgeListError`
    carrying the 1-based line number.
    """
    lines = text.splitlines()
    header = None
    edges = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 1 or not parts[0].isdigit() or int(parts[0]) < 1:
                raise EdgeListError(f"expected a positive vertex count, got {raw!r}", lineno)
            header = int(parts[0])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise EdgeListError(f"expected two vertex indices, got {raw!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", lineno)
        if u >= header or v >= header:
            raise EdgeListError(f"vertex index out of range [0, {header})", lineno)
        edges.add((min(u, v), max(u, v)))
    if header is None:
        raise EdgeListError("missing vertex count", 1)
    return Graph(header, frozenset(edges))
