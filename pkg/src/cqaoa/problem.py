"""NPO PB problem instances and their precomputed basis-state tables.

An instance bundles a feasibility oracle, an integer measure to be maximised,
an upper bound on that measure and a known feasible bitstring. Bitstrings are
plain Python integers; bit ``i`` is vertex ``i`` for vertex cover.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import CapacityError
from .graph import Graph

__all__ = [
    "DEFAULT_MAX_BITS",
    "NpoInstance",
    "FunctionInstance",
    "VertexCoverInstance",
    "Tables",
    "vc_validate",
    "vc_measure",
    "vc_initial",
    "build_tables",
    "feasible_connected",
    "popcount",
]

DEFAULT_MAX_BITS = 24


def popcount(x):
    """Number of set bits; works elementwise on integer arrays."""
    if isinstance(x, (int, np.integer)):
        return int(x).bit_count()
    x = np.asarray(x, dtype=np.uint64)
    return np.bitwise_count(x).astype(np.int64)


class NpoInstance(ABC):
    """Oracle bundle for a maximisation problem over ``n_bits``-bit strings.

    Subclasses implement :meth:`validate` and :meth:`measure` on single
    integers. The ``*_array`` hooks default to looping over those and can be
    overridden with vectorised versions for table construction.
    """

    n_bits: int
    measure_max: int

    @abstractmethod
    def validate(self, x: int) -> bool: ...

    @abstractmethod
    def measure(self, x: int) -> int: ...

    @property
    @abstractmethod
    def initial_feasible(self) -> int: ...

    def validate_array(self, xs: np.ndarray) -> np.ndarray:
        return np.fromiter((self.validate(int(x)) for x in xs), dtype=bool, count=len(xs))

    def measure_array(self, xs: np.ndarray) -> np.ndarray:
        return np.fromiter((self.measure(int(x)) for x in xs), dtype=np.int64, count=len(xs))


@dataclass(frozen=True, eq=False)
class FunctionInstance(NpoInstance):
    """An instance assembled from plain callables, mostly for tests."""

    n_bits: int
    validate_fn: Callable[[int], bool]
    measure_fn: Callable[[int], int]
    measure_max: int
    initial: int

    def validate(self, x):
        return bool(self.validate_fn(x))

    def measure(self, x):
        return int(self.measure_fn(x))

    @property
    def initial_feasible(self):
        return self.initial


def vc_validate(graph: Graph, x: int) -> bool:
    """True iff the vertices whose bits are set in ``x`` cover every edge."""
    return all((x >> u) & 1 or (x >> v) & 1 for u, v in graph.edges)


def vc_measure(graph: Graph, x: int) -> int:
    """Number of vertices left out of the cover."""
    return graph.n_vertices - popcount(x)


def vc_initial(graph: Graph) -> int:
    return (1 << graph.n_vertices) - 1


class VertexCoverInstance(NpoInstance):
    """Minimum vertex cover, phrased as maximising the uncovered vertex count.

    ``initial`` overrides the starting bitstring (all ones by default); it
    must itself be a cover.
    """

    def __init__(self, graph: Graph, initial: int | None = None):
        self.graph = graph
        self.n_bits = graph.n_vertices
        self.measure_max = graph.n_vertices
        self._initial = vc_initial(graph) if initial is None else int(initial)
        if not vc_validate(graph, self._initial):
            raise ValueError(f"initial bitstring {self._initial:#b} is not a vertex cover")

    def __repr__(self):
        return f"VertexCoverInstance(n={self.graph.n_vertices}, edges={self.graph.n_edges})"

    def validate(self, x):
        return vc_validate(self.graph, x)

    def measure(self, x):
        return vc_measure(self.graph, x)

    @property
    def initial_feasible(self):
        return self._initial

    def validate_array(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        ok = np.ones(xs.shape, dtype=bool)
        for u, v in self.graph.edges:
            ok &= ((xs >> u) | (xs >> v)) & 1 == 1
        return ok

    def measure_array(self, xs):
        return self.graph.n_vertices - popcount(xs)


class Tables(NamedTuple):
    """Feasibility and measure of every basis state, indexed by bitstring."""

    validity: np.ndarray
    measure: np.ndarray

    @property
    def n_bits(self) -> int:
        return int(self.validity.size).bit_length() - 1

    def feasible_indices(self) -> np.ndarray:
        return np.flatnonzero(self.validity)


def build_tables(instance: NpoInstance, max_bits: int = DEFAULT_MAX_BITS) -> Tables:
    n = instance.n_bits
    if n > max_bits:
        raise CapacityError(f"{n} bits exceeds the simulator cap of {max_bits}")
    xs = np.arange(1 << n, dtype=np.int64)
    validity = np.asarray(instance.validate_array(xs), dtype=bool)
    measure = np.asarray(instance.measure_array(xs), dtype=np.int64)
    for arr in (validity, measure):
        arr.flags.writeable = False
    return Tables(validity, measure)


def feasible_connected(instance: NpoInstance, tables: Tables) -> bool:
    """Whether the feasible states form one component under single bit flips.

    An instance with no feasible state at all is reported as not connected.
    """
    feasible = tables.feasible_indices()
    if feasible.size == 0:
        return False
    pos = np.full(tables.validity.size, -1, dtype=np.int64)
    pos[feasible] = np.arange(feasible.size)
    rows, cols = [], []
    for i in range(instance.n_bits):
        nb = feasible ^ (1 << i)
        keep = tables.validity[nb]
        rows.append(pos[feasible[keep]])
        cols.append(pos[nb[keep]])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    adj = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(feasible.size,) * 2)
    n_components, _ = connected_components(adj, directed=False)
    return n_components == 1
