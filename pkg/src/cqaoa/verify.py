"""Invariant checks runnable outside pytest (``cqaoa verify``)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .classical import exact_min_vertex_cover, gavril_2approx
from .evolve import ConstrainedMixer, Params, basis_state, evolve, expm_apply, mixer_matrix
from .graph import Graph, gen_erdos_renyi
from .optimize import OptimizerConfig, level_nesting_check
from .problem import VertexCoverInstance, build_tables, feasible_connected, popcount

__all__ = ["CheckResult", "all_graphs", "run_invariants"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


def _random_params(rng, p):
    return Params(tuple(rng.uniform(-3, 3, p)), tuple(rng.uniform(0, 2 * math.pi, p - 1)))


def _dense_walk(b, beta, vec):
    w, v = np.linalg.eigh(b)
    return v @ (np.exp(-1j * beta * w) * (v.conj().T @ vec))


def check_evolution(rng, max_n=4, draws=3):
    norm_drift = confinement = periodicity = variant_gap = krylov_gap = 0.0
    for n in range(1, max_n + 1):
        for graph in all_graphs(n):
            inst = VertexCoverInstance(graph)
            tables = build_tables(inst)
            start = basis_state(n, inst.initial_feasible)
            dense = mixer_matrix(tables.validity)
            for _ in range(draws):
                params = _random_params(rng, 2)
                out = evolve(inst, tables, params)
                other = evolve(inst, tables, params, variant="equal_validity")
                # Params reduces gammas mod 2 pi, so apply the unreduced angle by hand
                mixer = ConstrainedMixer(tables.validity)
                phase = np.exp(-1j * (params.gammas[0] + 2 * math.pi) * tables.measure)
                manual = expm_apply(expm_apply(start.amplitudes, params.betas[0], mixer) * phase, params.betas[1], mixer)
                beta = params.betas[0]
                krylov = expm_apply(start, beta, mixer).amplitudes
                norm_drift = max(norm_drift, abs(out.norm() - 1.0))
                confinement = max(confinement, float(np.abs(out.amplitudes[~tables.validity]).max(initial=0.0)))
                periodicity = max(periodicity, float(np.linalg.norm(manual - out.amplitudes)))
                variant_gap = max(variant_gap, float(np.linalg.norm(out.amplitudes - other.amplitudes)))
                krylov_gap = max(krylov_gap, float(np.linalg.norm(krylov - _dense_walk(dense, beta, start.amplitudes))))
    return [
        CheckResult("norm preservation", norm_drift <= 1e-8, f"max drift {norm_drift:.2e}"),
        CheckResult("feasibility confinement", confinement <= 1e-10, f"max infeasible amplitude {confinement:.2e}"),
        CheckResult("gamma periodicity", periodicity <= 1e-10, f"max difference {periodicity:.2e}"),
        CheckResult("mixer variant equivalence", variant_gap <= 1e-10, f"max difference {variant_gap:.2e}"),
        CheckResult("krylov vs dense", krylov_gap <= 1e-8, f"max difference {krylov_gap:.2e}"),
    ]


def check_classical(rng, n_graphs=200, max_n=12):
    worst_ratio, invalid, exact_mismatch = 0.0, 0, 0
    for _ in range(n_graphs):
        n = int(rng.integers(2, max_n + 1))
        graph = gen_erdos_renyi(n, float(rng.uniform(0.1, 0.9)), int(rng.integers(2**31)))
        inst = VertexCoverInstance(graph)
        tables = build_tables(inst)
        brute = int(popcount(tables.feasible_indices()).min())
        exact = exact_min_vertex_cover(graph)
        exact_mismatch += (exact.size != brute) or not exact.is_valid
        approx = gavril_2approx(graph, int(rng.integers(2**31)))
        invalid += not approx.is_valid
        if brute:
            worst_ratio = max(worst_ratio, approx.size / brute)
    return [
        CheckResult("gavril validity and factor 2", invalid == 0 and worst_ratio <= 2.0,
                    f"{invalid} invalid, worst ratio {worst_ratio:.3f}"),
        CheckResult("exact solver vs enumeration", exact_mismatch == 0, f"{exact_mismatch} mismatches"),
    ]


def check_connectivity(rng, n_graphs=50, max_n=12):
    failures = 0
    for _ in range(n_graphs):
        n = int(rng.integers(1, max_n + 1))
        inst = VertexCoverInstance(gen_erdos_renyi(n, float(rng.uniform(0, 1)), int(rng.integers(2**31))))
        failures += not feasible_connected(inst, build_tables(inst))
    return [CheckResult("feasible subgraph connectivity", failures == 0, f"{failures} disconnected of {n_graphs}")]


def check_nesting(rng, n_instances=10):
    failures = 0
    cfg = OptimizerConfig(p=2, restarts=3, max_iters=100)
    for _ in range(n_instances):
        n = int(rng.integers(3, 8))
        inst = VertexCoverInstance(gen_erdos_renyi(n, 0.5, int(rng.integers(2**31))))
        failures += not level_nesting_check(inst, 2, int(rng.integers(2**31)), cfg)
    return [CheckResult("level nesting p=2", failures == 0, f"{failures} failures of {n_instances}")]


def run_invariants(seed: int = 0, quick: bool = False) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    results += check_evolution(rng, max_n=3 if quick else 4, draws=1 if quick else 3)
    results += check_classical(rng, n_graphs=40 if quick else 200)
    results += check_connectivity(rng, n_graphs=10 if quick else 50)
    results += check_nesting(rng, n_instances=3 if quick else 10)
    return results
